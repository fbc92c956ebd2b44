#pragma once

#include <string>
#include <vector>

#include "acd/algo/hyper_config.hpp"
#include "acd/baseline/dataset.hpp"
#include "acd/models/acd_model.hpp"
#include "acd/models/autoencoder.hpp"
#include "acd/models/generator.hpp"

namespace acd {

struct AeTrainResult {
    Autoencoder<float> model;
    std::vector<double> epoch_loss;  // mean reconstruction MSE per epoch
};

/// Minimizes mean squared pixel error over the dataset with the standard
/// optimizer settings. Deterministic per seed.
AeTrainResult train_autoencoder(const FrameDataset& dataset, int epochs,
                                const HyperConfig& cfg, uint64_t seed);

struct RegionErrorReport {
    double mse_moving = 0;
    double mse_static = 0;
    double ratio = 0;  // mse_moving / max(mse_static, 1e-12)
    int64_t n_moving = 0;  // pixel-channel counts per region
    int64_t n_static = 0;
};

/// Region-split mean squared error between dataset frames and arbitrary
/// reconstructions (one per frame).
RegionErrorReport region_mse(const FrameDataset& dataset,
                             const std::vector<Observation>& recons);

/// Mean squared reconstruction error split by the moving/static masks
/// (eval mode; does not modify model or dataset).
RegionErrorReport region_error_report(Autoencoder<float>& model,
                                      const FrameDataset& dataset);

struct GanPretrainResult {
    Generator<float> generator;
    AcdModel<float> disc;  // trunk + discriminator head (actor/critic unused)
    std::vector<double> d_loss_history;
    std::vector<double> g_loss_history;
};

/// Standalone RaLSGAN training on dataset frames (no RL). When out_dir is
/// non-empty an 8x8 sample grid PNG is written there after training.
GanPretrainResult gan_pretrain(const FrameDataset& dataset, const HyperConfig& cfg,
                               int steps, uint64_t seed,
                               const std::string& out_dir = "");

/// Discriminator scores for a set of observations (eval path).
std::vector<double> disc_scores(AcdModel<float>& model,
                                const std::vector<Observation>& frames);

struct AeExperimentSummary {
    RegionErrorReport region_train;
    RegionErrorReport region_heldout;
    double ae_final_train_loss = 0;
    double disc_mean_real_score = 0;
    double disc_mean_fake_score = 0;
    std::string report_path;
};

/// The full baseline experiment: collect a random-policy dataset and a
/// held-out set, train the bottleneck autoencoder, compute the region
/// error split, pretrain the GAN and score held-out real frames vs
/// generator samples. Writes report.json, the sample grids and the
/// reconstruction grid into out_dir. Deterministic per seed.
AeExperimentSummary run_ae_experiment(GameKind kind, int frames_dataset, int epochs,
                                      int heldout_frames, int gan_steps, uint64_t seed,
                                      const HyperConfig& cfg, const std::string& out_dir);

/// 8x8 grid of observations as an RGB png (the three temporal channels
/// are mapped onto color channels).
void write_observation_grid(const std::string& path,
                            const std::vector<Observation>& frames);

}  // namespace acd
