#include "gridpf/report.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <sstream>

namespace gridpf {

using ordered_json = nlohmann::ordered_json;

namespace {

// fixed rendering for CSV cells: 12 significant digits, empty for NaN
std::string num(double v) {
    if (std::isnan(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

ordered_json json_or_null(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

ordered_json config_json(const ReportConfig& cfg) {
    ordered_json j;
    j["case"] = cfg.case_name;
    j["mode"] = cfg.mode;
    j["tolerance"] = cfg.tolerance;
    j["max_iterations"] = cfg.max_iterations;
    j["max_hops"] = cfg.max_hops;
    j["outer_cap"] = cfg.outer_cap;
    j["seed"] = cfg.seed;
    j["samples"] = cfg.samples;
    return j;
}

ordered_json violations_json(const std::vector<Violation>& list,
                             const NetworkCase& nc) {
    ordered_json arr = ordered_json::array();
    for (const Violation& v : list) {
        arr.push_back({{"bus", nc.buses[v.bus].id},
                       {"bound", v.bound},
                       {"magnitude", v.magnitude},
                       {"side", v.upper ? "upper" : "lower"}});
    }
    return arr;
}

ordered_json report_json(const ViolationReport& rep, const NetworkCase& nc) {
    ordered_json j;
    j["feasible"] = rep.feasible();
    j["gen_q"] = violations_json(rep.gen_q, nc);
    j["gen_v"] = violations_json(rep.gen_v, nc);
    j["load_v"] = violations_json(rep.load_v, nc);
    j["total_count"] = rep.total_count();
    j["total_magnitude"] = rep.total_magnitude();
    j["v_magnitude"] = rep.v_magnitude();
    return j;
}

}  // namespace

std::string switching_result_to_json(const SwitchingResult& r,
                                     const NetworkCase& nc,
                                     const ReportConfig& cfg) {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["status"] = to_string(r.final_status);
    j["feasible"] = r.feasible();
    j["first_diverged"] = r.first_diverged;
    j["used_fallback"] = r.used_fallback;
    j["outer_iterations"] = r.outer_iterations;
    j["final_iteration"] = r.final_iteration;
    j["q_switches"] = r.q_switches;
    j["ppqv_switches"] = r.ppqv_switches;
    j["resolved_v_violations"] = r.resolved_v_violations;
    j["violations"] = report_json(r.final_report, nc);

    ordered_json types = ordered_json::array();
    for (int k = 0; k < r.final_assignment.n(); ++k)
        types.push_back({{"bus", nc.buses[k].id},
                         {"type", to_string(r.final_assignment.types[k])}});
    j["bus_types"] = types;

    ordered_json sol = ordered_json::array();
    for (int k = 0; k < nc.n_bus(); ++k)
        sol.push_back({{"bus", nc.buses[k].id},
                       {"vm", r.final_state.v[k]},
                       {"va", r.final_state.theta[k]},
                       {"p", r.final_state.p[k]},
                       {"q", r.final_state.q[k]}});
    j["solution"] = sol;

    ordered_json hist = ordered_json::array();
    for (const IterationRecord& rec : r.history)
        hist.push_back({{"status", to_string(rec.outcome.status)},
                        {"nr_iterations", rec.outcome.iterations},
                        {"max_mismatch", rec.outcome.max_mismatch},
                        {"violations", rec.report.total_count()}});
    j["history"] = hist;
    j["wall_time"] = r.wall_time;
    return j.dump(2) + "\n";
}

std::string switching_result_to_csv(const SwitchingResult& r,
                                    const NetworkCase& nc,
                                    const ReportConfig& cfg) {
    std::ostringstream os;
    os << "key,value\n";
    os << "case," << cfg.case_name << "\n";
    os << "mode," << cfg.mode << "\n";
    os << "status," << to_string(r.final_status) << "\n";
    os << "feasible," << (r.feasible() ? "true" : "false") << "\n";
    os << "outer_iterations," << r.outer_iterations << "\n";
    os << "q_switches," << r.q_switches << "\n";
    os << "ppqv_switches," << r.ppqv_switches << "\n";
    os << "resolved_v_violations," << r.resolved_v_violations << "\n";
    os << "gen_q_violations," << r.final_report.gen_q.size() << "\n";
    os << "gen_v_violations," << r.final_report.gen_v.size() << "\n";
    os << "load_v_violations," << r.final_report.load_v.size() << "\n";
    os << "total_magnitude," << num(r.final_report.total_magnitude()) << "\n";
    os << "v_magnitude," << num(r.final_report.v_magnitude()) << "\n";
    os << "wall_time," << num(r.wall_time) << "\n";
    return os.str();
}

static ordered_json mode_row_json(const ModeStatistics& row,
                                  bool include_timing) {
    ordered_json j;
    j["mode"] = to_string(row.mode);
    j["feasible_pct"] = row.feasible_pct;
    j["avg_q_violations"] = json_or_null(row.avg_q_violations);
    j["avg_v_violations"] = json_or_null(row.avg_v_violations);
    j["avg_v_magnitude"] = json_or_null(row.avg_v_magnitude);
    j["pct_v_count_improvement"] = json_or_null(row.pct_v_count_improvement);
    j["pct_v_magnitude_improvement"] =
        json_or_null(row.pct_v_magnitude_improvement);
    j["switch_ratio"] = json_or_null(row.switch_ratio);
    if (include_timing) j["avg_time"] = row.avg_time;
    j["avg_outer_iterations"] = row.avg_outer_iterations;
    j["n_usable"] = row.n_usable;
    return j;
}

std::string batch_to_json(const BatchStatistics& s, const NetworkCase& nc,
                          const ReportConfig& cfg, bool include_timing) {
    (void)nc;
    ordered_json j;
    j["config"] = config_json(cfg);
    j["n_samples"] = s.n_samples;
    j["base_seed"] = s.base_seed;
    j["modes"] = ordered_json::array();
    for (const ModeStatistics& row : s.rows)
        j["modes"].push_back(mode_row_json(row, include_timing));
    ordered_json hist = ordered_json::array();
    for (const HistogramRow& h : s.histogram) {
        ordered_json row;
        row["mode"] = to_string(h.mode);
        row["bin_low"] = h.bin_low;
        if (std::isinf(h.bin_high))
            row["bin_high"] = "inf";
        else
            row["bin_high"] = h.bin_high;
        row["count"] = h.count;
        hist.push_back(row);
    }
    j["histogram"] = hist;
    return j.dump(2) + "\n";
}

std::string batch_to_csv(const BatchStatistics& s, const ReportConfig& cfg,
                         bool include_timing) {
    std::ostringstream os;
    os << "# case=" << cfg.case_name << " samples=" << s.n_samples
       << " seed=" << s.base_seed << " tolerance=" << num(cfg.tolerance)
       << " max_iterations=" << cfg.max_iterations
       << " max_hops=" << cfg.max_hops << " outer_cap=" << cfg.outer_cap
       << "\n";
    os << "mode,feasible_pct,avg_q_violations,avg_v_violations,"
          "avg_v_magnitude,pct_v_count_improvement,"
          "pct_v_magnitude_improvement,switch_ratio";
    if (include_timing) os << ",avg_time";
    os << ",avg_outer_iterations\n";
    for (const ModeStatistics& row : s.rows) {
        os << to_string(row.mode) << "," << num(row.feasible_pct) << ","
           << num(row.avg_q_violations) << "," << num(row.avg_v_violations)
           << "," << num(row.avg_v_magnitude) << ","
           << num(row.pct_v_count_improvement) << ","
           << num(row.pct_v_magnitude_improvement) << ","
           << num(row.switch_ratio);
        if (include_timing) os << "," << num(row.avg_time);
        os << "," << num(row.avg_outer_iterations) << "\n";
    }
    return os.str();
}

std::string histogram_to_csv(const BatchStatistics& s) {
    std::ostringstream os;
    os << "mode,bin_low,bin_high,count\n";
    for (const HistogramRow& h : s.histogram) {
        os << to_string(h.mode) << "," << num(h.bin_low) << ",";
        if (std::isinf(h.bin_high))
            os << "inf";
        else
            os << num(h.bin_high);
        os << "," << h.count << "\n";
    }
    return os.str();
}

std::string catalog_to_json(const PathCatalog& c, const NetworkCase& nc,
                            const ReportConfig& cfg) {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["pairs"] = ordered_json::array();
    for (const auto& [key, path] : c.pairs) {
        ordered_json row;
        row["pq_bus"] = nc.buses[key.first].id;
        row["pv_bus"] = nc.buses[key.second].id;
        ordered_json p = ordered_json::array();
        for (int bus : path) p.push_back(nc.buses[bus].id);
        row["path"] = p;
        row["hops"] = static_cast<int>(path.size()) - 1;
        j["pairs"].push_back(row);
    }
    j["pair_count"] = j["pairs"].size();
    return j.dump(2) + "\n";
}

std::string reserialize_switching_json(const std::string& text) {
    // parse into the same ordered representation and re-emit; any structural
    // drift (field order, lost fields, number text) shows up as inequality
    ordered_json j = ordered_json::parse(text);
    return j.dump(2) + "\n";
}

}  // namespace gridpf
