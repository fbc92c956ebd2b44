#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace acd {

/// One row of training telemetry, written per update. mean_return_100 is
/// the mean undiscounted return over the last 100 completed episodes and
/// is NaN until the first episode completes; the GAN columns are NaN for
/// plain PPO runs.
struct MetricsRecord {
    int64_t global_frame = 0;
    int64_t episodes_done = 0;
    double mean_return_100 = 0;
    double policy_loss = 0;
    double value_loss = 0;
    double entropy = 0;
    double d_loss = 0;
    double g_loss = 0;
    double real_score = 0;
    double fake_score = 0;
};

inline constexpr const char* kMetricsHeader =
    "frame,episodes,mean_return_100,policy_loss,value_loss,entropy,d_loss,"
    "g_loss,real_score,fake_score";

std::string format_metrics_row(const MetricsRecord& r);

/// Parses a metrics file; throws with the offending line number on
/// malformed input.
std::vector<MetricsRecord> read_metrics_file(const std::string& path);

/// Appends rows to a CSV file, creating it (with header) if needed.
class MetricsWriter {
public:
    MetricsWriter() = default;
    void open(const std::string& path, bool append);
    void append(const MetricsRecord& r);
    bool is_open() const { return out_.is_open(); }

private:
    std::ofstream out_;
};

}  // namespace acd
