#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace acd {

struct AlgorithmCurve {
    std::string algorithm;
    int n_runs = 0;
    std::vector<int64_t> frames;       // common frame grid across the runs
    std::vector<double> mean_return;   // averaged over runs; NaN while undefined
    double final_mean_return = 0;      // average of each run's last row
};

struct CompareResult {
    std::vector<AlgorithmCurve> curves;
    std::string summary;
    std::string plot_path;
};

/// Reads metrics from completed run directories (each holding
/// manifest.json and metrics.csv), groups them by algorithm, aligns rows
/// by global_frame, averages the curve metric across seeds and writes one
/// plot with a curve per algorithm. Missing files are reported with their
/// exact paths.
CompareResult compare_runs(const std::vector<std::string>& run_dirs,
                           const std::string& out_plot_path);

}  // namespace acd
