#include "acd/train/metrics.hpp"

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>

namespace acd {

namespace {
std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}
}  // namespace

std::string format_metrics_row(const MetricsRecord& r) {
    std::ostringstream out;
    out << r.global_frame << ',' << r.episodes_done << ',' << fmt(r.mean_return_100)
        << ',' << fmt(r.policy_loss) << ',' << fmt(r.value_loss) << ','
        << fmt(r.entropy) << ',' << fmt(r.d_loss) << ',' << fmt(r.g_loss) << ','
        << fmt(r.real_score) << ',' << fmt(r.fake_score);
    return out.str();
}

std::vector<MetricsRecord> read_metrics_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open metrics file: " + path);
    std::vector<MetricsRecord> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        if (lineno == 1) {
            if (line != kMetricsHeader)
                throw std::runtime_error(path + ":1: unexpected metrics header");
            continue;
        }
        if (line.empty()) continue;
        MetricsRecord r;
        const int got = std::sscanf(
            line.c_str(), "%ld,%ld,%lf,%lf,%lf,%lf,%lf,%lf,%lf,%lf",
            &r.global_frame, &r.episodes_done, &r.mean_return_100, &r.policy_loss,
            &r.value_loss, &r.entropy, &r.d_loss, &r.g_loss, &r.real_score,
            &r.fake_score);
        if (got != 10)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed metrics row");
        rows.push_back(r);
    }
    return rows;
}

void MetricsWriter::open(const std::string& path, bool append) {
    const bool exists = std::filesystem::exists(path);
    out_.open(path, append ? std::ios::app : std::ios::trunc);
    if (!out_) throw std::runtime_error("cannot open metrics file for write: " + path);
    if (!append || !exists) out_ << kMetricsHeader << '\n';
}

void MetricsWriter::append(const MetricsRecord& r) {
    out_ << format_metrics_row(r) << '\n';
    out_.flush();
}

}  // namespace acd
