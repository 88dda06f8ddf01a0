#pragma once

#include <string>

#include "gridpf/experiments.hpp"
#include "gridpf/switching.hpp"

namespace gridpf {

// Effective configuration echoed into every report. Execution-only knobs
// (parallelism) stay out so equal inputs give byte-equal reports.
struct ReportConfig {
    std::string case_name;
    std::string mode;
    double tolerance = 1e-8;
    int max_iterations = 30;
    int max_hops = 8;
    int outer_cap = 20;
    uint64_t seed = 0;
    int samples = 0;
};

// Deterministic field order, >= 9 significant digits on floating point.
std::string switching_result_to_json(const SwitchingResult& r,
                                     const NetworkCase& nc,
                                     const ReportConfig& cfg);
std::string switching_result_to_csv(const SwitchingResult& r,
                                    const NetworkCase& nc,
                                    const ReportConfig& cfg);

std::string batch_to_json(const BatchStatistics& s, const NetworkCase& nc,
                          const ReportConfig& cfg, bool include_timing = true);
// Table-style one row per mode. include_timing=false drops the wall-clock
// column, leaving only run-deterministic fields.
std::string batch_to_csv(const BatchStatistics& s,
                         const ReportConfig& cfg, bool include_timing = true);
std::string histogram_to_csv(const BatchStatistics& s);

std::string catalog_to_json(const PathCatalog& c, const NetworkCase& nc,
                            const ReportConfig& cfg);

// Round-trip check helper: parses a switching-result JSON document back into
// the summary fields it carries and re-serializes it.
std::string reserialize_switching_json(const std::string& text);

}  // namespace gridpf
