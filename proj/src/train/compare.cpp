#include "acd/train/compare.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "acd/train/metrics.hpp"
#include "acd/train/plot.hpp"

namespace acd {

namespace fs = std::filesystem;

namespace {

struct RunData {
    std::string algorithm;
    std::vector<MetricsRecord> rows;
};

RunData load_run(const std::string& dir) {
    const fs::path manifest_path = fs::path(dir) / "manifest.json";
    const fs::path metrics_path = fs::path(dir) / "metrics.csv";
    std::vector<std::string> missing;
    if (!fs::exists(manifest_path)) missing.push_back(manifest_path.string());
    if (!fs::exists(metrics_path)) missing.push_back(metrics_path.string());
    if (!missing.empty()) {
        std::string msg = "compare: missing run files:";
        for (const std::string& m : missing) msg += "\n  " + m;
        throw std::runtime_error(msg);
    }
    std::ifstream in(manifest_path);
    nlohmann::json j;
    in >> j;
    RunData run;
    run.algorithm = j.at("algorithm").get<std::string>();
    run.rows = read_metrics_file(metrics_path.string());
    if (run.rows.empty())
        throw std::runtime_error("compare: no metrics rows in " + metrics_path.string());
    return run;
}

}  // namespace

CompareResult compare_runs(const std::vector<std::string>& run_dirs,
                           const std::string& out_plot_path) {
    if (run_dirs.empty()) throw std::invalid_argument("compare: no run directories");

    std::map<std::string, std::vector<RunData>> groups;
    for (const std::string& dir : run_dirs) {
        RunData run = load_run(dir);
        groups[run.algorithm].push_back(std::move(run));
    }

    CompareResult result;
    std::vector<PlotSeries> series;
    std::ostringstream summary;
    for (auto& [algorithm, runs] : groups) {
        // Common frame grid: frames present in every run of this group.
        std::map<int64_t, int> frame_count;
        for (const RunData& run : runs) {
            for (const MetricsRecord& row : run.rows) frame_count[row.global_frame]++;
        }
        AlgorithmCurve curve;
        curve.algorithm = algorithm;
        curve.n_runs = static_cast<int>(runs.size());
        for (const auto& [frame, count] : frame_count) {
            if (count == static_cast<int>(runs.size())) curve.frames.push_back(frame);
        }
        for (const int64_t frame : curve.frames) {
            double sum = 0;
            bool any_nan = false;
            for (const RunData& run : runs) {
                const auto it = std::lower_bound(
                    run.rows.begin(), run.rows.end(), frame,
                    [](const MetricsRecord& r, int64_t f) { return r.global_frame < f; });
                if (std::isnan(it->mean_return_100)) any_nan = true;
                sum += it->mean_return_100;
            }
            curve.mean_return.push_back(any_nan ? std::nan("")
                                                : sum / static_cast<double>(runs.size()));
        }
        double final_sum = 0;
        for (const RunData& run : runs) final_sum += run.rows.back().mean_return_100;
        curve.final_mean_return = final_sum / static_cast<double>(runs.size());

        PlotSeries s;
        s.label = algorithm;
        for (size_t i = 0; i < curve.frames.size(); i++) {
            s.x.push_back(static_cast<double>(curve.frames[i]));
            s.y.push_back(curve.mean_return[i]);
        }
        series.push_back(std::move(s));

        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s: final mean_return_100 = %.4f (%d run%s)",
                      algorithm.c_str(), curve.final_mean_return, curve.n_runs,
                      curve.n_runs == 1 ? "" : "s");
        summary << buf << '\n';
        result.curves.push_back(std::move(curve));
    }

    render_line_plot(series, "MEAN RETURN OVER LAST 100 EPISODES", "FRAMES",
                     "RETURN", out_plot_path);
    result.plot_path = out_plot_path;
    result.summary = summary.str();

    std::ofstream txt(out_plot_path + ".txt");
    txt << result.summary;
    return result;
}

}  // namespace acd
