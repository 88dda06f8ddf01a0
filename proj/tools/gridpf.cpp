// gridpf: five-type Newton-Raphson power flow with bound-violation switching.
//   solve  one case, one mode, full result report
//   batch  Monte-Carlo load scenarios, per-mode statistics + histogram
//   paths  unique all-PQ-interior paths between PQ and PV buses
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "gridpf/experiments.hpp"
#include "gridpf/matpower.hpp"
#include "gridpf/report.hpp"

namespace {

std::string resolve_case_path(const std::string& arg) {
    namespace fs = std::filesystem;
    if (fs::exists(arg)) return arg;
    if (const char* dir = std::getenv("GRIDPF_CASE_DIR")) {
        fs::path p = fs::path(dir) / arg;
        if (fs::exists(p)) return p.string();
        p += ".m";
        if (fs::exists(p)) return p.string();
    }
    throw gridpf::CaseError("case file not found: " + arg);
}

void emit(const std::string& text, const std::string& output) {
    if (output.empty() || output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(output, std::ios::binary);
    if (!out) throw gridpf::CaseError("cannot write output file: " + output);
    out << text;
}

void apply_load_overrides(gridpf::NetworkCase& nc, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw gridpf::CaseError("cannot open load override file: " + path);
    nlohmann::json j = nlohmann::json::parse(in);
    auto apply = [&](const char* key, auto setter) {
        if (!j.contains(key)) return;
        for (auto& [id_str, value] : j.at(key).items()) {
            const int bus_id = std::stoi(id_str);
            setter(nc.buses[nc.index_of(bus_id)], value.template get<double>());
        }
    };
    apply("pd", [](gridpf::BusRecord& b, double v) { b.pd = v; });
    apply("qd", [](gridpf::BusRecord& b, double v) { b.qd = v; });
    validate_case(nc);
}

struct CommonOpts {
    std::string case_arg;
    std::string output = "-";
    std::string format = "json";
    double tolerance = 1e-8;
    int max_iter = 30;
    int max_hops = 8;
    int outer_cap = 20;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
    cmd->add_option("case", o.case_arg, "MATPOWER case file (or a name under $GRIDPF_CASE_DIR)")
        ->required();
    cmd->add_option("-o,--output", o.output, "Output file, '-' for stdout");
    cmd->add_option("--format", o.format, "Output format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tolerance", o.tolerance, "Mismatch tolerance, p.u.");
    cmd->add_option("--max-iter", o.max_iter, "Newton iteration cap");
    cmd->add_option("--max-hops", o.max_hops, "Path search hop budget");
    cmd->add_option("--outer-cap", o.outer_cap, "Outer switching iteration cap");
}

gridpf::OuterOptions outer_options(const CommonOpts& o) {
    gridpf::OuterOptions opts;
    opts.solve.tolerance = o.tolerance;
    opts.solve.max_iterations = o.max_iter;
    opts.max_hops = o.max_hops;
    opts.outer_cap = o.outer_cap;
    return opts;
}

gridpf::ReportConfig report_config(const CommonOpts& o,
                                   const gridpf::NetworkCase& nc,
                                   const std::string& mode, uint64_t seed,
                                   int samples) {
    gridpf::ReportConfig cfg;
    cfg.case_name = nc.name;
    cfg.mode = mode;
    cfg.tolerance = o.tolerance;
    cfg.max_iterations = o.max_iter;
    cfg.max_hops = o.max_hops;
    cfg.outer_cap = o.outer_cap;
    cfg.seed = seed;
    cfg.samples = samples;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Newton-Raphson AC power flow with bus-type switching"};
    app.require_subcommand(1);

    CommonOpts solve_opts, batch_opts, paths_opts;
    std::string solve_mode = "ppqv";
    std::string loads_file;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one case");
    add_common(solve_cmd, solve_opts);
    solve_cmd->add_option("--mode", solve_mode, "Switching mode")
        ->check(CLI::IsMember({"baseline", "qlim", "ppqv", "ppqv-prime"}));
    solve_cmd->add_option("--loads", loads_file,
                          "JSON per-bus demand override {\"pd\":{id:MW},\"qd\":{id:MVAr}}");

    int samples = 10000;
    uint64_t seed = 42;
    int jobs = static_cast<int>(std::thread::hardware_concurrency());
    if (jobs < 1) jobs = 1;
    std::string histogram_file;
    std::string modes_arg = "baseline,qlim,ppqv,ppqv-prime";
    bool omit_timing = false;
    auto* batch_cmd = app.add_subcommand("batch", "Monte-Carlo batch run");
    add_common(batch_cmd, batch_opts);
    batch_cmd->add_option("--samples", samples, "Scenario count");
    batch_cmd->add_option("--seed", seed, "Base seed");
    batch_cmd->add_option("--jobs", jobs, "Worker threads");
    batch_cmd->add_option("--modes", modes_arg, "Comma-separated mode list");
    batch_cmd->add_option("--histogram", histogram_file,
                          "Also write the violation histogram CSV here");
    batch_cmd->add_flag("--omit-timing", omit_timing,
                        "Drop wall-clock columns (timing varies run to run)");

    auto* paths_cmd =
        app.add_subcommand("paths", "Unique-path catalog for the initial types");
    add_common(paths_cmd, paths_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);  // prints usage/message
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (solve_cmd->parsed()) {
            const CommonOpts& o = solve_opts;
            std::vector<std::string> warnings;
            gridpf::NetworkCase nc =
                gridpf::load_matpower_file(resolve_case_path(o.case_arg), &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            if (!loads_file.empty()) apply_load_overrides(nc, loads_file);
            const auto mode = gridpf::parse_switch_mode(solve_mode);
            const gridpf::SwitchingResult r =
                gridpf::run_with_switching(nc, *mode, outer_options(o));
            const auto cfg = report_config(o, nc, solve_mode, 0, 0);
            emit(o.format == "csv"
                     ? gridpf::switching_result_to_csv(r, nc, cfg)
                     : gridpf::switching_result_to_json(r, nc, cfg),
                 o.output);
            return r.first_diverged ? 1 : 0;
        }
        if (batch_cmd->parsed()) {
            const CommonOpts& o = batch_opts;
            std::vector<std::string> warnings;
            gridpf::NetworkCase nc =
                gridpf::load_matpower_file(resolve_case_path(o.case_arg), &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            std::vector<gridpf::SwitchMode> modes;
            std::stringstream ss(modes_arg);
            std::string tok;
            while (std::getline(ss, tok, ',')) {
                const auto m = gridpf::parse_switch_mode(tok);
                if (!m) throw gridpf::CaseError("unknown mode: " + tok);
                modes.push_back(*m);
            }
            gridpf::BatchOptions bopts;
            bopts.outer = outer_options(o);
            bopts.jobs = jobs;
            const gridpf::BatchStatistics stats =
                gridpf::run_batch(nc, samples, modes, seed, bopts);
            const auto cfg = report_config(o, nc, modes_arg, seed, samples);
            emit(o.format == "csv"
                     ? gridpf::batch_to_csv(stats, cfg, !omit_timing)
                     : gridpf::batch_to_json(stats, nc, cfg, !omit_timing),
                 o.output);
            if (!histogram_file.empty())
                emit(gridpf::histogram_to_csv(stats), histogram_file);
            return 0;
        }
        // paths
        const CommonOpts& o = paths_opts;
        std::vector<std::string> warnings;
        gridpf::NetworkCase nc =
            gridpf::load_matpower_file(resolve_case_path(o.case_arg), &warnings);
        for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
        const gridpf::Topology topo = gridpf::adjacency(nc);
        const gridpf::BusTypeAssignment a = gridpf::classify_buses(nc);
        const gridpf::PathCatalog cat =
            gridpf::build_path_catalog(topo, a, o.max_hops);
        const auto cfg = report_config(o, nc, "paths", 0, 0);
        emit(gridpf::catalog_to_json(cat, nc, cfg), o.output);
        return 0;
    } catch (const gridpf::CaseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
