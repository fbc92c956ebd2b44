#include "acd/baseline/ae_experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "acd/algo/losses.hpp"
#include "acd/core/png.hpp"
#include "acd/nn/rmsprop.hpp"
#include "acd/train/config_io.hpp"

namespace acd {

namespace {

void gather_frames(const FrameDataset& ds, const std::vector<int>& indices,
                   Mat<float>& out) {
    const int b = static_cast<int>(indices.size());
    out.ensure(Observation::kChannels, b * Observation::kPixels);
    for (int c = 0; c < Observation::kChannels; c++) {
        float* dst = out.row(c);
        for (int j = 0; j < b; j++) {
            std::memcpy(dst + static_cast<size_t>(j) * Observation::kPixels,
                        ds.frames[indices[j]].channel(c),
                        Observation::kPixels * sizeof(float));
        }
    }
}

}  // namespace

AeTrainResult train_autoencoder(const FrameDataset& dataset, int epochs,
                                const HyperConfig& cfg, uint64_t seed) {
    if (dataset.size() == 0)
        throw std::invalid_argument("train_autoencoder: empty dataset");
    AeTrainResult result;
    Rng init_rng = Rng::derive(seed, 10);
    Rng shuffle_rng = Rng::derive(seed, 11);
    result.model.init(init_rng);
    ParamRegistry<float> reg;
    result.model.register_params(reg);
    RmsProp<float> opt(reg, static_cast<float>(cfg.rmsprop_alpha),
                       static_cast<float>(cfg.rmsprop_eps));

    const int n = static_cast<int>(dataset.size());
    const int mb = std::min(cfg.minibatch, n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    typename Autoencoder<float>::Cache cache;
    Mat<float> input, drecon;
    std::vector<int> indices;

    for (int epoch = 0; epoch < epochs; epoch++) {
        shuffle_rng.shuffle(order);
        double loss_sum = 0;
        int steps = 0;
        for (int start = 0; start < n; start += mb) {
            const int count = std::min(mb, n - start);
            indices.assign(order.begin() + start, order.begin() + start + count);
            gather_frames(dataset, indices, input);

            reg.zero_grad();
            result.model.forward(input, count, cache, /*train=*/true);
            const Mat<float>& recon = result.model.reconstruction(cache);

            const size_t elems = recon.size();
            double sq = 0;
            drecon.ensure(recon.rows, recon.cols);
            for (size_t i = 0; i < elems; i++) {
                const double d = static_cast<double>(recon.v[i]) - input.v[i];
                sq += d * d;
                drecon.v[i] = static_cast<float>(2.0 * d / static_cast<double>(elems));
            }
            result.model.backward(cache, drecon, /*param_grads=*/true);
            opt.step(static_cast<float>(cfg.learning_rate));

            loss_sum += sq / static_cast<double>(elems);
            steps++;
        }
        result.epoch_loss.push_back(loss_sum / steps);
    }
    return result;
}

RegionErrorReport region_mse(const FrameDataset& dataset,
                             const std::vector<Observation>& recons) {
    if (dataset.size() == 0) throw std::invalid_argument("region_mse: empty dataset");
    if (dataset.masks.size() != dataset.frames.size())
        throw std::invalid_argument("region_mse: dataset has no masks");
    if (recons.size() != dataset.frames.size())
        throw std::invalid_argument("region_mse: reconstruction count mismatch");

    double sq_moving = 0, sq_static = 0;
    RegionErrorReport report;
    for (size_t i = 0; i < dataset.size(); i++) {
        const RegionMask& mask = dataset.masks[i];
        for (int c = 0; c < Observation::kChannels; c++) {
            const float* rec = recons[i].channel(c);
            const float* ref = dataset.frames[i].channel(c);
            for (int p = 0; p < Observation::kPixels; p++) {
                const double d = static_cast<double>(rec[p]) - ref[p];
                if (mask.moving[p]) {
                    sq_moving += d * d;
                    report.n_moving++;
                } else {
                    sq_static += d * d;
                    report.n_static++;
                }
            }
        }
    }
    report.mse_moving =
        report.n_moving > 0 ? sq_moving / static_cast<double>(report.n_moving) : 0;
    report.mse_static =
        report.n_static > 0 ? sq_static / static_cast<double>(report.n_static) : 0;
    report.ratio = report.mse_moving / std::max(report.mse_static, 1e-12);
    return report;
}

RegionErrorReport region_error_report(Autoencoder<float>& model,
                                      const FrameDataset& dataset) {
    if (dataset.size() == 0)
        throw std::invalid_argument("region_error_report: empty dataset");
    if (dataset.masks.size() != dataset.frames.size())
        throw std::invalid_argument("region_error_report: dataset has no masks");

    typename Autoencoder<float>::Cache cache;
    Mat<float> input;
    std::vector<int> indices;
    std::vector<Observation> recons(dataset.size());

    const int n = static_cast<int>(dataset.size());
    const int mb = 32;
    for (int start = 0; start < n; start += mb) {
        const int count = std::min(mb, n - start);
        indices.resize(count);
        std::iota(indices.begin(), indices.end(), start);
        gather_frames(dataset, indices, input);
        model.forward(input, count, cache, /*train=*/false);
        const Mat<float>& recon = model.reconstruction(cache);
        for (int j = 0; j < count; j++) {
            for (int c = 0; c < Observation::kChannels; c++) {
                std::memcpy(recons[start + j].channel(c),
                            recon.row(c) + static_cast<size_t>(j) * Observation::kPixels,
                            Observation::kPixels * sizeof(float));
            }
        }
    }
    return region_mse(dataset, recons);
}

GanPretrainResult gan_pretrain(const FrameDataset& dataset, const HyperConfig& cfg,
                               int steps, uint64_t seed, const std::string& out_dir) {
    if (dataset.size() == 0) throw std::invalid_argument("gan_pretrain: empty dataset");
    GanPretrainResult result;
    Rng disc_rng = Rng::derive(seed, 20);
    Rng gen_rng = Rng::derive(seed, 21);
    Rng batch_rng = Rng::derive(seed, 22);
    Rng fake_rng = Rng::derive(seed, 23);
    Rng gstep_rng = Rng::derive(seed, 24);

    result.disc.init(disc_rng, /*actions=*/3);
    result.generator.init(gen_rng, cfg.latent_dim);
    ParamRegistry<float> disc_reg, gen_reg;
    result.disc.register_params(disc_reg);
    result.generator.register_params(gen_reg, "gen");
    RmsProp<float> disc_opt(disc_reg, static_cast<float>(cfg.rmsprop_alpha),
                            static_cast<float>(cfg.rmsprop_eps));
    RmsProp<float> gen_opt(gen_reg, static_cast<float>(cfg.rmsprop_alpha),
                           static_cast<float>(cfg.rmsprop_eps));

    const int mb = std::min<int>(cfg.minibatch, static_cast<int>(dataset.size()));
    const float lr = static_cast<float>(cfg.learning_rate);
    typename AcdModel<float>::Cache real_cache, fake_cache;
    typename Generator<float>::Cache gen_cache;
    Mat<float> real_input, dreal_mat, dfake_mat, dfake_input;
    std::vector<int> indices(mb);
    std::vector<float> real_scores(mb), fake_scores(mb), dreal(mb), dfake(mb);

    for (int step = 0; step < steps; step++) {
        for (int j = 0; j < mb; j++)
            indices[j] = static_cast<int>(batch_rng.uniform_int(dataset.size()));
        gather_frames(dataset, indices, real_input);

        // Discriminator step.
        disc_reg.zero_grad();
        result.disc.forward_trunk(real_input, mb, real_cache);
        result.disc.forward_disc(real_cache);
        const Mat<float> z = sample_latent<float>(cfg.latent_dim, mb, fake_rng);
        result.generator.forward(z, mb, gen_cache, /*train=*/true);
        result.disc.forward_trunk(gen_cache.out, mb, fake_cache);
        result.disc.forward_disc(fake_cache);
        for (int j = 0; j < mb; j++) {
            real_scores[j] = real_cache.scores(0, j);
            fake_scores[j] = fake_cache.scores(0, j);
        }
        const float d_loss = ralsgan_d_loss<float>(real_scores, fake_scores);
        ralsgan_d_grads<float>(real_scores, fake_scores, dreal, dfake);
        dreal_mat.ensure(1, mb);
        dfake_mat.ensure(1, mb);
        for (int j = 0; j < mb; j++) {
            dreal_mat(0, j) = dreal[j];
            dfake_mat(0, j) = dfake[j];
        }
        result.disc.backward(real_cache, nullptr, nullptr, &dreal_mat, nullptr, true);
        result.disc.backward(fake_cache, nullptr, nullptr, &dfake_mat, nullptr, true);
        disc_opt.step(lr);

        // Generator step against the frozen discriminator.
        gen_reg.zero_grad();
        const Mat<float> z2 = sample_latent<float>(cfg.latent_dim, mb, gstep_rng);
        result.generator.forward(z2, mb, gen_cache, /*train=*/true);
        result.disc.forward_trunk(gen_cache.out, mb, fake_cache);
        result.disc.forward_disc(fake_cache);
        result.disc.forward_trunk(real_input, mb, real_cache);
        result.disc.forward_disc(real_cache);
        for (int j = 0; j < mb; j++) {
            real_scores[j] = real_cache.scores(0, j);
            fake_scores[j] = fake_cache.scores(0, j);
        }
        const float g_loss = ralsgan_g_loss<float>(real_scores, fake_scores);
        ralsgan_g_grads<float>(real_scores, fake_scores, dreal, dfake);
        for (int j = 0; j < mb; j++) dfake_mat(0, j) = dfake[j];
        result.disc.backward(fake_cache, nullptr, nullptr, &dfake_mat, &dfake_input,
                             /*param_grads=*/false);
        result.generator.backward(gen_cache, dfake_input, nullptr, true);
        gen_opt.step(lr);

        result.d_loss_history.push_back(d_loss);
        result.g_loss_history.push_back(g_loss);
    }

    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        Rng sample_rng = Rng::derive(seed, 25);
        const Mat<float> z = sample_latent<float>(cfg.latent_dim, 64, sample_rng);
        result.generator.forward(z, 64, gen_cache, /*train=*/false);
        std::vector<Observation> samples(64);
        for (int j = 0; j < 64; j++) {
            for (int c = 0; c < Observation::kChannels; c++) {
                const float* src =
                    gen_cache.out.row(c) + static_cast<size_t>(j) * Observation::kPixels;
                std::memcpy(samples[j].channel(c), src,
                            Observation::kPixels * sizeof(float));
            }
        }
        write_observation_grid(
            (std::filesystem::path(out_dir) / "gan_samples.png").string(), samples);
    }
    return result;
}

std::vector<double> disc_scores(AcdModel<float>& model,
                                const std::vector<Observation>& frames) {
    typename AcdModel<float>::Cache cache;
    Mat<float> input;
    std::vector<double> scores;
    scores.reserve(frames.size());
    const int mb = 32;
    for (size_t start = 0; start < frames.size(); start += mb) {
        const int count = static_cast<int>(std::min<size_t>(mb, frames.size() - start));
        input.ensure(Observation::kChannels, count * Observation::kPixels);
        for (int c = 0; c < Observation::kChannels; c++) {
            float* dst = input.row(c);
            for (int j = 0; j < count; j++)
                std::memcpy(dst + static_cast<size_t>(j) * Observation::kPixels,
                            frames[start + j].channel(c),
                            Observation::kPixels * sizeof(float));
        }
        model.forward_trunk(input, count, cache);
        model.forward_disc(cache);
        for (int j = 0; j < count; j++)
            scores.push_back(static_cast<double>(cache.scores(0, j)));
    }
    return scores;
}

AeExperimentSummary run_ae_experiment(GameKind kind, int frames_dataset, int epochs,
                                      int heldout_frames, int gan_steps, uint64_t seed,
                                      const HyperConfig& cfg, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    AeExperimentSummary summary;

    const FrameDataset train_set =
        collect_dataset(kind, frames_dataset, seed, cfg.max_episode_ticks);
    const FrameDataset heldout = collect_dataset(
        kind, heldout_frames, Rng::splitmix64(seed + 0x9e37), cfg.max_episode_ticks);

    AeTrainResult ae = train_autoencoder(train_set, epochs, cfg, seed);
    summary.ae_final_train_loss = ae.epoch_loss.back();
    summary.region_train = region_error_report(ae.model, train_set);
    summary.region_heldout = region_error_report(ae.model, heldout);

    GanPretrainResult gan = gan_pretrain(train_set, cfg, gan_steps, seed, out_dir);
    const std::vector<double> real_scores = disc_scores(gan.disc, heldout.frames);

    std::vector<Observation> fakes(64);
    {
        Rng z_rng = Rng::derive(seed, 30);
        const Mat<float> z = sample_latent<float>(cfg.latent_dim, 64, z_rng);
        typename Generator<float>::Cache cache;
        gan.generator.forward(z, 64, cache, /*train=*/false);
        for (int j = 0; j < 64; j++)
            for (int c = 0; c < Observation::kChannels; c++)
                std::memcpy(fakes[j].channel(c),
                            cache.out.row(c) + static_cast<size_t>(j) * Observation::kPixels,
                            Observation::kPixels * sizeof(float));
    }
    const std::vector<double> fake_scores = disc_scores(gan.disc, fakes);
    auto mean = [](const std::vector<double>& v) {
        double s = 0;
        for (const double x : v) s += x;
        return v.empty() ? 0.0 : s / static_cast<double>(v.size());
    };
    summary.disc_mean_real_score = mean(real_scores);
    summary.disc_mean_fake_score = mean(fake_scores);

    // Held-out frames (rows 1-4) above their reconstructions (rows 5-8).
    std::vector<Observation> recon_grid;
    {
        typename Autoencoder<float>::Cache cache;
        const int count = static_cast<int>(std::min<size_t>(32, heldout.size()));
        Mat<float> input(Observation::kChannels, count * Observation::kPixels);
        for (int c = 0; c < Observation::kChannels; c++)
            for (int j = 0; j < count; j++)
                std::memcpy(input.row(c) + static_cast<size_t>(j) * Observation::kPixels,
                            heldout.frames[j].channel(c),
                            Observation::kPixels * sizeof(float));
        ae.model.forward(input, count, cache, /*train=*/false);
        for (int j = 0; j < count; j++) recon_grid.push_back(heldout.frames[j]);
        for (int j = 0; j < count; j++) {
            Observation o;
            for (int c = 0; c < Observation::kChannels; c++)
                std::memcpy(o.channel(c),
                            ae.model.reconstruction(cache).row(c) +
                                static_cast<size_t>(j) * Observation::kPixels,
                            Observation::kPixels * sizeof(float));
            recon_grid.push_back(std::move(o));
        }
    }
    write_observation_grid((fs::path(out_dir) / "ae_reconstructions.png").string(),
                           recon_grid);
    write_observation_grid(
        (fs::path(out_dir) / "real_samples.png").string(),
        {heldout.frames.begin(),
         heldout.frames.begin() + std::min<size_t>(64, heldout.size())});

    nlohmann::json j;
    j["game"] = game_kind_name(kind);
    j["seed"] = seed;
    j["frames_dataset"] = frames_dataset;
    j["heldout_frames"] = heldout_frames;
    j["epochs"] = epochs;
    j["gan_steps"] = gan_steps;
    j["config"] = config_to_text(cfg);
    j["ae_final_train_loss"] = summary.ae_final_train_loss;
    j["region_error_train"] = {{"mse_moving", summary.region_train.mse_moving},
                               {"mse_static", summary.region_train.mse_static},
                               {"ratio", summary.region_train.ratio}};
    j["region_error_heldout"] = {{"mse_moving", summary.region_heldout.mse_moving},
                                 {"mse_static", summary.region_heldout.mse_static},
                                 {"ratio", summary.region_heldout.ratio}};
    j["disc_mean_real_score"] = summary.disc_mean_real_score;
    j["disc_mean_fake_score"] = summary.disc_mean_fake_score;
    summary.report_path = (fs::path(out_dir) / "report.json").string();
    std::ofstream report(summary.report_path);
    if (!report) throw std::runtime_error("cannot write " + summary.report_path);
    report << j.dump(2) << '\n';
    return summary;
}

void write_observation_grid(const std::string& path,
                            const std::vector<Observation>& frames) {
    const int tiles = 8;
    const int size = Observation::kSize;
    const int width = tiles * size, height = tiles * size;
    std::vector<uint8_t> rgb(static_cast<size_t>(width) * height * 3, 0);
    for (int t = 0; t < tiles * tiles && t < static_cast<int>(frames.size()); t++) {
        const int ty = (t / tiles) * size, tx = (t % tiles) * size;
        for (int y = 0; y < size; y++) {
            for (int x = 0; x < size; x++) {
                const size_t base =
                    (static_cast<size_t>(ty + y) * width + tx + x) * 3;
                for (int c = 0; c < 3; c++) {
                    const float v = std::clamp(frames[t].at(c, y, x), 0.0f, 1.0f);
                    rgb[base + c] = static_cast<uint8_t>(std::lround(v * 255.0f));
                }
            }
        }
    }
    write_png_rgb8(path, rgb, width, height);
}

}  // namespace acd
