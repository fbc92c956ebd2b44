#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acd/baseline/ae_experiment.hpp"
#include "acd/baseline/dataset.hpp"
#include "acd/core/rng.hpp"
#include "acd/train/compare.hpp"
#include "acd/train/config_io.hpp"
#include "acd/train/trainer.hpp"

namespace {

acd::HyperConfig load_config_or_default(const std::string& path) {
    if (path.empty()) return acd::HyperConfig{};
    return acd::config_load(path);
}

std::vector<std::string> split_csv(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const std::string& item : items) {
        std::stringstream ss(item);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

int run_train(const std::string& algo_name, const std::string& env_name,
              int64_t frames, uint64_t seed, const std::string& config_path,
              const std::string& out_dir, bool resume) {
    const auto algo = acd::parse_algorithm(algo_name);
    if (!algo) throw CLI::ValidationError("--algo", "must be 'ppo' or 'acd'");
    const auto kind = acd::parse_game_kind(env_name);
    if (!kind) throw CLI::ValidationError("--env", "must be 'toy-pong' or 'toy-breakout'");
    acd::HyperConfig cfg = load_config_or_default(config_path);

    std::printf("training %s on %s for %lld frames (seed %llu) -> %s\n",
                algo_name.c_str(), env_name.c_str(),
                static_cast<long long>(frames),
                static_cast<unsigned long long>(seed), out_dir.c_str());
    const acd::TrainResult result =
        acd::train(*algo, *kind, frames, seed, cfg, out_dir, resume);
    std::printf("done: %lld updates, %lld episodes, final mean_return_100 = %.4f\n",
                static_cast<long long>(result.updates_done),
                static_cast<long long>(result.episodes_done),
                result.final_mean_return_100);
    std::printf("metrics: %s\n", result.metrics_path.c_str());
    return 0;
}

int run_ae_experiment(const std::string& env_name, int frames_dataset, int epochs,
                      int heldout_frames, int gan_steps, uint64_t seed,
                      const std::string& config_path, const std::string& out_dir) {
    const auto kind = acd::parse_game_kind(env_name);
    if (!kind) throw CLI::ValidationError("--env", "must be 'toy-pong' or 'toy-breakout'");
    const acd::HyperConfig cfg = load_config_or_default(config_path);

    std::printf("ae-experiment on %s: %d frames, %d epochs, %d gan steps (seed %llu)\n",
                env_name.c_str(), frames_dataset, epochs, gan_steps,
                static_cast<unsigned long long>(seed));
    const acd::AeExperimentSummary summary = acd::run_ae_experiment(
        *kind, frames_dataset, epochs, heldout_frames, gan_steps, seed, cfg, out_dir);
    std::printf("autoencoder region error (held-out): moving %.6g static %.6g ratio %.3f\n",
                summary.region_heldout.mse_moving, summary.region_heldout.mse_static,
                summary.region_heldout.ratio);
    std::printf("discriminator: mean real score %.4f, mean fake score %.4f\n",
                summary.disc_mean_real_score, summary.disc_mean_fake_score);
    std::printf("report written to %s\n", summary.report_path.c_str());
    return 0;
}

int run_compare(const std::vector<std::string>& run_args, const std::string& out_plot) {
    const std::vector<std::string> dirs = split_csv(run_args);
    const acd::CompareResult result = acd::compare_runs(dirs, out_plot);
    std::fputs(result.summary.c_str(), stdout);
    std::printf("plot written to %s\n", result.plot_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Actor-Critic-Discriminator training on toy pixel games"};
    app.require_subcommand(1);

    std::string algo_name, env_name, config_path, out_dir, out_plot;
    int64_t frames = -1;
    uint64_t seed = 1;
    bool resume = false;
    int frames_dataset = 10000, epochs = 20, heldout_frames = 1000, gan_steps = 1000;
    std::vector<std::string> run_dirs;

    CLI::App* train = app.add_subcommand("train", "Train PPO or ACD on a toy game");
    train->add_option("--algo", algo_name, "Algorithm: ppo or acd")->required();
    train->add_option("--env", env_name, "Game: toy-pong or toy-breakout")->required();
    CLI::Option* frames_opt =
        train->add_option("--frames", frames, "Raw frame budget (default: config total_frames)");
    train->add_option("--seed", seed, "Run seed")->required();
    train->add_option("--config", config_path, "key=value config file");
    train->add_option("--out", out_dir, "Output directory")->required();
    train->add_flag("--resume", resume, "Resume from checkpoint in --out");

    CLI::App* ae = app.add_subcommand(
        "ae-experiment", "Autoencoder baseline + GAN pretraining experiments");
    ae->add_option("--env", env_name, "Game: toy-pong or toy-breakout")->required();
    ae->add_option("--frames-dataset", frames_dataset, "Training frames to collect")->required();
    ae->add_option("--epochs", epochs, "Autoencoder epochs")->required();
    ae->add_option("--frames-heldout", heldout_frames, "Held-out frames");
    ae->add_option("--gan-steps", gan_steps, "GAN pretraining steps");
    ae->add_option("--seed", seed, "Experiment seed");
    ae->add_option("--config", config_path, "key=value config file");
    ae->add_option("--out", out_dir, "Output directory")->required();

    CLI::App* compare = app.add_subcommand("compare", "Average runs and plot curves");
    compare->add_option("--runs", run_dirs, "Run directories (comma separated or repeated)")
        ->required();
    compare->add_option("--out", out_plot, "Output plot path (png)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*train) {
            if (!*frames_opt) frames = load_config_or_default(config_path).total_frames;
            return run_train(algo_name, env_name, frames, seed, config_path, out_dir, resume);
        }
        if (*ae)
            return run_ae_experiment(env_name, frames_dataset, epochs, heldout_frames,
                                     gan_steps, seed, config_path, out_dir);
        if (*compare) return run_compare(run_dirs, out_plot);
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
