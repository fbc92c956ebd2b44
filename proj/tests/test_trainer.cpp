#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "acd/core/rng.hpp"
#include "acd/train/checkpoint.hpp"
#include "acd/train/compare.hpp"
#include "acd/train/config_io.hpp"
#include "acd/train/metrics.hpp"
#include "acd/train/trainer.hpp"

using namespace acd;

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Small-but-real training config: full-size networks, tiny rollouts.
HyperConfig tiny_cfg() {
    HyperConfig cfg;
    cfg.n_env = 2;
    cfg.horizon = 4;
    cfg.minibatch = 8;
    cfg.epochs = 2;
    cfg.max_episode_ticks = 60;
    cfg.checkpoint_every = 1;
    return cfg;
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& name) : path(fs::path("test_tmp") / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

}  // namespace

TEST_CASE("empty config text yields the published defaults") {
    const HyperConfig cfg = config_from_text("");
    CHECK(cfg.gamma == 0.99);
    CHECK(cfg.lambda == 0.95);
    CHECK(cfg.clip_eps == 0.1);
    CHECK(cfg.minibatch == 32);
    CHECK(cfg.learning_rate == 0.0003);
    CHECK(cfg.n_env == 8);
    CHECK(cfg.horizon == 128);
    CHECK(cfg.epochs == 3);
    CHECK(cfg.latent_dim == 100);
    CHECK(cfg.c1 == 1.0);
    CHECK(cfg.c2 == 0.01);
    CHECK(cfg.c_v == 0.5);
    CHECK(cfg.c_d == 1.0);
    CHECK(cfg.rmsprop_alpha == 0.99);
    CHECK(cfg.rmsprop_eps == 1e-5);
}

TEST_CASE("config parsing reports line numbers and rejects bad input") {
    CHECK_THROWS_WITH_AS(config_from_text("gamma = 1.5\n", "cfg"),
                         doctest::Contains("gamma"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(config_from_text("# ok\nwhat = 1\n", "cfg"),
                         doctest::Contains("cfg:2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(config_from_text("\n\ngamma roughly 1\n", "cfg"),
                         doctest::Contains("cfg:3"), std::runtime_error);
    CHECK_THROWS_WITH_AS(config_from_text("gamma = fast\n", "cfg"),
                         doctest::Contains("cfg:1"), std::runtime_error);
    CHECK_THROWS_AS(config_from_text("minibatch = 7\n", "cfg"), std::invalid_argument);
}

TEST_CASE("config round-trips through its text form") {
    HyperConfig cfg;
    cfg.gamma = 0.875;
    cfg.minibatch = 16;
    cfg.curve_metric = CurveMetric::kLast100FramesDiscounted;
    cfg.normalize_advantages = false;
    const HyperConfig back = config_from_text(config_to_text(cfg));
    CHECK(back.gamma == cfg.gamma);
    CHECK(back.minibatch == cfg.minibatch);
    CHECK(back.curve_metric == cfg.curve_metric);
    CHECK(back.normalize_advantages == cfg.normalize_advantages);
    CHECK(config_to_text(back) == config_to_text(cfg));
}

TEST_CASE("named-array container round-trips bitwise and verifies shapes") {
    Mat<float> a(3, 4), b(2, 2);
    Rng rng(5);
    for (auto& v : a.v) v = static_cast<float>(rng.uniform());
    for (auto& v : b.v) v = static_cast<float>(rng.uniform());
    const std::string payload =
        pack_named_arrays({{"layer.w", &a}, {"layer.b", &b}});

    Mat<float> a2(3, 4), b2(2, 2);
    unpack_named_arrays(payload, {{"layer.w", &a2}, {"layer.b", &b2}});
    CHECK(a2.v == a.v);
    CHECK(b2.v == b.v);

    Mat<float> wrong_shape(4, 3);
    CHECK_THROWS_WITH_AS(
        unpack_named_arrays(payload, {{"layer.w", &wrong_shape}, {"layer.b", &b2}}),
        doctest::Contains("shape mismatch"), std::runtime_error);
    Mat<float> extra(1, 1);
    CHECK_THROWS_WITH_AS(unpack_named_arrays(payload, {{"layer.w", &a2}}),
                         doctest::Contains("unexpected array"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        unpack_named_arrays(payload, {{"layer.w", &a2},
                                      {"layer.b", &b2},
                                      {"missing", &extra}}),
        doctest::Contains("missing"), std::runtime_error);
}

TEST_CASE("frame accounting: U updates consume U*T*N*3 frames") {
    TempDir dir("frames");
    const HyperConfig cfg = tiny_cfg();
    // 3 full rollouts are 72 frames; asking for 50 needs exactly 3 updates
    const TrainResult result =
        train(Algorithm::kPpo, GameKind::kToyPong, 50, 1, cfg, dir.str());
    CHECK(result.updates_done == 3);
    CHECK(result.frames_done == 3 * cfg.horizon * cfg.n_env * 3);
    const auto rows = read_metrics_file(result.metrics_path);
    REQUIRE(rows.size() == 3);
    for (size_t u = 0; u < rows.size(); u++) {
        CHECK(rows[u].global_frame ==
              static_cast<int64_t>(u + 1) * cfg.horizon * cfg.n_env * 3);
    }
}

TEST_CASE("a budget just under one rollout still performs exactly one update") {
    TempDir dir("one_update");
    const HyperConfig cfg = tiny_cfg();
    const int64_t one_rollout = cfg.horizon * cfg.n_env * 3;
    const TrainResult result =
        train(Algorithm::kPpo, GameKind::kToyPong, one_rollout - 1, 1, cfg, dir.str());
    CHECK(result.updates_done == 1);
    CHECK(read_metrics_file(result.metrics_path).size() == 1);
}

TEST_CASE("metric rows are strictly ordered by frame") {
    TempDir dir("ordered");
    const TrainResult result =
        train(Algorithm::kAcd, GameKind::kToyBreakout, 120, 3, tiny_cfg(), dir.str());
    const auto rows = read_metrics_file(result.metrics_path);
    REQUIRE(rows.size() >= 2);
    for (size_t i = 1; i < rows.size(); i++)
        CHECK(rows[i].global_frame > rows[i - 1].global_frame);
}

TEST_CASE("identical train invocations produce byte-identical metrics") {
    TempDir dir_a("det_a"), dir_b("det_b");
    const HyperConfig cfg = tiny_cfg();
    for (const Algorithm algo : {Algorithm::kPpo, Algorithm::kAcd}) {
        const TrainResult a =
            train(algo, GameKind::kToyPong, 100, 7, cfg, dir_a.str() + algorithm_name(algo));
        const TrainResult b =
            train(algo, GameKind::kToyPong, 100, 7, cfg, dir_b.str() + algorithm_name(algo));
        CHECK(read_file(a.metrics_path) == read_file(b.metrics_path));
        fs::remove_all(dir_a.str() + algorithm_name(algo));
        fs::remove_all(dir_b.str() + algorithm_name(algo));
    }
}

TEST_CASE("interrupt and resume reproduces the uninterrupted run") {
    TempDir full_dir("resume_full"), part_dir("resume_part");
    const HyperConfig cfg = tiny_cfg();
    const int64_t per_update = cfg.horizon * cfg.n_env * 3;

    const TrainResult full = train(Algorithm::kAcd, GameKind::kToyPong,
                                   5 * per_update, 11, cfg, full_dir.str());
    const TrainResult part = train(Algorithm::kAcd, GameKind::kToyPong,
                                   2 * per_update, 11, cfg, part_dir.str());
    CHECK(part.updates_done == 2);
    const TrainResult resumed =
        train(Algorithm::kAcd, GameKind::kToyPong, 5 * per_update, 11, cfg,
              part_dir.str(), /*resume=*/true);
    CHECK(resumed.updates_done == 5);
    CHECK(read_file(full.metrics_path) == read_file(resumed.metrics_path));
    CHECK(resumed.final_mean_return_100 ==
          doctest::Approx(full.final_mean_return_100));
}

TEST_CASE("resume refuses a mismatched config or algorithm") {
    TempDir dir("resume_mismatch");
    const HyperConfig cfg = tiny_cfg();
    train(Algorithm::kPpo, GameKind::kToyPong, 50, 2, cfg, dir.str());
    HyperConfig other = cfg;
    other.learning_rate = 0.001;
    CHECK_THROWS_WITH_AS(
        train(Algorithm::kPpo, GameKind::kToyPong, 100, 2, other, dir.str(), true),
        doctest::Contains("config"), std::runtime_error);
    CHECK_THROWS_WITH_AS(
        train(Algorithm::kAcd, GameKind::kToyPong, 100, 2, cfg, dir.str(), true),
        doctest::Contains("algorithm"), std::runtime_error);
}

TEST_CASE("compare averages curves and reports missing inputs") {
    TempDir dir("cmp");
    const HyperConfig cfg = tiny_cfg();
    const TrainResult run = train(Algorithm::kPpo, GameKind::kToyPong, 100, 5, cfg,
                                  (fs::path(dir.str()) / "r1").string());

    SUBCASE("a single run's averaged curve is its own curve") {
        const CompareResult result = compare_runs(
            {(fs::path(dir.str()) / "r1").string()},
            (fs::path(dir.str()) / "plot.png").string());
        REQUIRE(result.curves.size() == 1);
        const auto rows = read_metrics_file(run.metrics_path);
        REQUIRE(result.curves[0].frames.size() == rows.size());
        for (size_t i = 0; i < rows.size(); i++) {
            CHECK(result.curves[0].frames[i] == rows[i].global_frame);
            if (!std::isnan(rows[i].mean_return_100))
                CHECK(result.curves[0].mean_return[i] ==
                      doctest::Approx(rows[i].mean_return_100));
        }
        CHECK(fs::exists(result.plot_path));
    }

    SUBCASE("three replays of the same run average to the same curve") {
        for (const char* name : {"r2", "r3"}) {
            train(Algorithm::kPpo, GameKind::kToyPong, 100, 5, cfg,
                  (fs::path(dir.str()) / name).string());
        }
        const CompareResult result = compare_runs(
            {(fs::path(dir.str()) / "r1").string(),
             (fs::path(dir.str()) / "r2").string(),
             (fs::path(dir.str()) / "r3").string()},
            (fs::path(dir.str()) / "plot3.png").string());
        REQUIRE(result.curves.size() == 1);
        CHECK(result.curves[0].n_runs == 3);
        CHECK(result.curves[0].final_mean_return ==
              doctest::Approx(run.final_mean_return_100));
    }

    SUBCASE("missing run directories are reported with exact paths") {
        const std::string missing = (fs::path(dir.str()) / "nope").string();
        CHECK_THROWS_WITH_AS(
            compare_runs({missing}, (fs::path(dir.str()) / "p.png").string()),
            doctest::Contains((missing + "/manifest.json").c_str()), std::runtime_error);
    }
}

TEST_CASE("compare output is idempotent for unchanged inputs") {
    TempDir dir("cmp_idem");
    const HyperConfig cfg = tiny_cfg();
    train(Algorithm::kPpo, GameKind::kToyPong, 75, 9, cfg,
          (fs::path(dir.str()) / "run").string());
    const std::string plot_a = (fs::path(dir.str()) / "a.png").string();
    const std::string plot_b = (fs::path(dir.str()) / "b.png").string();
    compare_runs({(fs::path(dir.str()) / "run").string()}, plot_a);
    compare_runs({(fs::path(dir.str()) / "run").string()}, plot_b);
    CHECK(read_file(plot_a) == read_file(plot_b));
    CHECK(read_file(plot_a + ".txt") == read_file(plot_b + ".txt"));
}
