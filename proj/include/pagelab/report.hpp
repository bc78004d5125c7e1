#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "pagelab/balls_bins.hpp"
#include "pagelab/class_checks.hpp"
#include "pagelab/experiments.hpp"

namespace pagelab {

using Json = nlohmann::ordered_json;

enum class ReportFormat { Csv, Json };
ReportFormat parse_report_format(const std::string& text);

// Shortest exact decimal form of a double (round-trips bit-exactly).
std::string format_double(double v);

// One grid point of the balls-and-bins audit.
struct BallsBinsAuditRow {
    std::string check; // mc-vs-exact | overflow-bound | saturation-bound
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::uint64_t alpha = 0;
    double epsilon = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    double estimate = 0.0;
    double stderr_ = 0.0;
    double bound = 0.0; // exact probability or analytic bound, per check
    bool holds = true;
    bool hypothesis_met = true;
};

// CSV renderings, one fixed documented header per row type.
std::string render_csv(const std::vector<SweepRow>& rows);
std::string render_csv(const std::vector<RehashRow>& rows);
std::string render_csv(const std::vector<ClassVerdict>& rows);
std::string render_csv(const std::vector<BallsBinsAuditRow>& rows);

// JSON renderings: {"meta": ..., "rows": [...]}.
Json to_json(const SweepRow& row);
Json to_json(const RehashRow& row);
Json to_json(const ClassVerdict& row);
Json to_json(const BallsBinsAuditRow& row);
Json to_json(const ExperimentConfig& config);

template <typename Row>
Json render_json(const Json& meta, const std::vector<Row>& rows) {
    Json out;
    out["meta"] = meta;
    out["rows"] = Json::array();
    for (const Row& r : rows) out["rows"].push_back(to_json(r));
    return out;
}

// Standard meta block: tool version plus the echoed configuration.
Json make_meta(const Json& config);

void write_text_file(const std::string& path, const std::string& text);

} // namespace pagelab
