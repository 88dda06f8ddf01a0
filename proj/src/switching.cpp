#include "gridpf/switching.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

namespace gridpf {

const char* to_string(SwitchMode m) {
    switch (m) {
        case SwitchMode::baseline: return "baseline";
        case SwitchMode::qlim: return "qlim";
        case SwitchMode::ppqv_batch: return "ppqv";
        case SwitchMode::ppqv_incremental: return "ppqv_prime";
    }
    return "?";
}

std::optional<SwitchMode> parse_switch_mode(const std::string& s) {
    if (s == "baseline") return SwitchMode::baseline;
    if (s == "qlim") return SwitchMode::qlim;
    if (s == "ppqv" || s == "ppqv_batch") return SwitchMode::ppqv_batch;
    if (s == "ppqv-prime" || s == "ppqv_prime" || s == "ppqv_incremental")
        return SwitchMode::ppqv_incremental;
    return std::nullopt;
}

std::vector<int> enforce_q_limits(const ViolationReport& report,
                                  const NetworkCase& nc, BusTypeAssignment& a,
                                  bool* skipped_slack) {
    if (skipped_slack) *skipped_slack = false;
    std::vector<int> switched;
    for (const Violation& v : report.gen_q) {
        const int k = v.bus;
        if (a.types[k] == BusType::Vtheta) {
            if (skipped_slack) *skipped_slack = true;
            continue;
        }
        if (a.types[k] != BusType::PV) continue;  // stale report entry
        a.types[k] = BusType::PQ;
        // clamp the generator output to the violated bound, then express it
        // as a net injection again
        a.spec_q[k] = v.bound - nc.buses[k].qd / nc.base_mva;
        a.q_switched[k] = 1;
        switched.push_back(k);
    }
    return switched;
}

std::vector<PairSelection> select_ppqv_pairs(const ViolationReport& report,
                                             const PathCatalog& catalog) {
    // violated load buses, smallest violation first, bus index breaking ties
    std::vector<const Violation*> order;
    for (const Violation& v : report.load_v) order.push_back(&v);
    std::sort(order.begin(), order.end(),
              [](const Violation* x, const Violation* y) {
                  return std::tie(x->magnitude, x->bus) <
                         std::tie(y->magnitude, y->bus);
              });

    auto pairs = catalog.pairs;  // working copy, entries get erased
    std::vector<PairSelection> out;
    for (const Violation* v : order) {
        const int u = v->bus;
        // shortest available path from u; ties to the lowest donor index
        const std::vector<int>* best = nullptr;
        int best_donor = -1;
        for (const auto& [key, path] : pairs) {
            if (key.first != u) continue;
            if (!best || path.size() < best->size() ||
                (path.size() == best->size() && key.second < best_donor)) {
                best = &path;
                best_donor = key.second;
            }
        }
        if (!best) continue;  // no feasible pair left for this bus
        PairSelection sel;
        sel.pqv_bus = u;
        sel.p_bus = best_donor;
        sel.path = *best;

        // every bus on the chosen path leaves the pool entirely
        std::set<int> claimed(sel.path.begin(), sel.path.end());
        for (auto it = pairs.begin(); it != pairs.end();) {
            bool hit = false;
            for (int bus : it->second) {
                if (claimed.count(bus)) {
                    hit = true;
                    break;
                }
            }
            it = hit ? pairs.erase(it) : ++it;
        }
        out.push_back(std::move(sel));
    }
    return out;
}

void apply_ppqv_switch(const PairSelection& sel, const NetworkCase& nc,
                       const ViolationReport& report, BusTypeAssignment& a) {
    const int u = sel.pqv_bus, d = sel.p_bus;
    if (a.types[u] != BusType::PQ)
        throw CaseError("bus " + std::to_string(nc.buses[u].id) +
                        " is not PQ; cannot promote to PQV");
    if (a.types[d] != BusType::PV)
        throw CaseError("bus " + std::to_string(nc.buses[d].id) +
                        " is not PV; cannot demote to P");
    const Violation* viol = nullptr;
    for (const Violation& v : report.load_v)
        if (v.bus == u) viol = &v;
    if (!viol)
        throw CaseError("bus " + std::to_string(nc.buses[u].id) +
                        " has no load voltage violation on record");
    a.types[u] = BusType::PQV;
    a.spec_v[u] = viol->bound;  // pin to the violated bound
    a.types[d] = BusType::P;
    // spec_p stays; the voltage setpoint is given up
}

namespace {

// lexicographic iterate ranking, best first. the pairing modes put the
// load-voltage figures first (the quantity the switching exists to
// improve); qlim puts the reactive count first (its whole contract is
// enforced limits). counts fit exactly in a double, so one array type
// serves both orders. a fully clean iterate ranks top either way.
using RankKey = std::array<double, 5>;

RankKey rank_pairing(const ViolationReport& r) {
    return {double(r.load_v.size()), r.load_v_magnitude(),
            double(r.gen_q.size()), double(r.gen_v.size()),
            r.total_magnitude()};
}

RankKey rank_qlim(const ViolationReport& r) {
    return {double(r.gen_q.size()), double(r.load_v.size()),
            r.load_v_magnitude(), double(r.gen_v.size()),
            r.total_magnitude()};
}

}  // namespace

SwitchingResult run_with_switching(const NetworkCase& nc,
                                   const AdmittanceMatrix& y,
                                   const Topology& topo, SwitchMode mode,
                                   const OuterOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    const GenBounds bounds = aggregate_gen_bounds(nc);
    BusTypeAssignment a = classify_buses(nc);

    SwitchingResult res;
    int best_idx = -1;
    RankKey best_key{};

    const bool pairing_mode = mode == SwitchMode::ppqv_batch ||
                              mode == SwitchMode::ppqv_incremental;

    auto record = [&](BusTypeAssignment assign, SolveOutcome outcome,
                      ViolationReport report) {
        res.history.push_back(IterationRecord{std::move(assign),
                                              std::move(outcome),
                                              std::move(report)});
        // only converged iterates compete for the fallback slot. the pairing
        // modes additionally demand the never-worse-than-the-first-solve
        // guarantee on both total violation count and summed load-voltage
        // excursion; within those budgets the ranking picks the winner.
        if (res.history.back().outcome.status != SolveStatus::converged)
            return;
        if (pairing_mode && best_idx >= 0) {
            const ViolationReport& first = res.history.front().report;
            const ViolationReport& cur = res.history.back().report;
            if (cur.total_count() > first.total_count()) return;
            if (cur.load_v_magnitude() > first.load_v_magnitude()) return;
        }
        const RankKey key = pairing_mode
                                ? rank_pairing(res.history.back().report)
                                : rank_qlim(res.history.back().report);
        if (best_idx < 0 || key < best_key) {
            best_idx = static_cast<int>(res.history.size()) - 1;
            best_key = key;
        }
    };

    auto finalize = [&](int idx) {
        const IterationRecord& rec = res.history[idx];
        res.final_state = rec.outcome.state;
        res.final_report = rec.report;
        res.final_assignment = rec.assignment;
        res.final_status = rec.outcome.status;
        res.final_iteration = idx + 1;
        if (!res.history.empty() &&
            res.history.front().outcome.status == SolveStatus::converged) {
            const int base = static_cast<int>(res.history.front().report.load_v.size());
            const int now = static_cast<int>(res.final_report.load_v.size());
            res.resolved_v_violations = std::max(0, base - now);
        }
        res.wall_time =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        return res;
    };

    // terminal exit that did not come from a mid-run divergence: the pairing
    // modes hand back the best converged iterate on record, qlim and
    // baseline the current one
    auto finalize_terminal = [&]() {
        const int last = static_cast<int>(res.history.size()) - 1;
        if (pairing_mode && best_idx >= 0) return finalize(best_idx);
        return finalize(last);
    };

    const bool q_enabled = mode != SwitchMode::baseline;
    const bool pairs_enabled = pairing_mode;

    for (int outer = 1; outer <= options.outer_cap; ++outer) {
        res.outer_iterations = outer;
        SolveOutcome outcome;
        if (res.history.empty()) {
            outcome = nr_solve(y, a, options.solve);
        } else {
            // re-solves continue from the last converged operating point;
            // the re-typed system's solution sits next to it, while a flat
            // start would have to find it from scratch and at heavy load
            // often cannot
            SolveOptions warm = options.solve;
            warm.flat_start = false;
            outcome = nr_solve(y, a, warm, &res.history.back().outcome.state);
        }
        if (outcome.status != SolveStatus::converged) {
            if (res.history.empty()) {
                // nothing to fall back on: report the failure as-is
                res.first_diverged = true;
                record(a, std::move(outcome), ViolationReport{});
                return finalize(0);
            }
            record(a, std::move(outcome), ViolationReport{});
            res.used_fallback = true;
            return finalize(best_idx);
        }
        ViolationReport report =
            check_violations(outcome.state, nc, a, bounds);
        record(a, std::move(outcome), report);

        if (report.feasible()) return finalize_terminal();
        if (mode == SwitchMode::baseline) return finalize(0);

        if (q_enabled && !report.gen_q.empty()) {
            std::vector<int> switched = enforce_q_limits(report, nc, a);
            if (!switched.empty()) {
                res.q_switches += static_cast<int>(switched.size());
                continue;
            }
            // nothing switchable in the list; fall through
        }
        if (pairs_enabled && !report.load_v.empty()) {
            PathCatalog catalog =
                build_path_catalog(topo, a, options.max_hops);
            std::vector<PairSelection> sel =
                select_ppqv_pairs(report, catalog);
            if (!sel.empty()) {
                if (mode == SwitchMode::ppqv_incremental) sel.resize(1);
                for (const PairSelection& s : sel)
                    apply_ppqv_switch(s, nc, report, a);
                res.ppqv_switches += static_cast<int>(sel.size());
                continue;
            }
        }
        return finalize_terminal();  // no action possible
    }
    return finalize_terminal();  // outer cap reached
}

SwitchingResult run_with_switching(const NetworkCase& nc, SwitchMode mode,
                                   const OuterOptions& options) {
    const AdmittanceMatrix y = build_ybus(nc);
    const Topology topo = adjacency(nc);
    return run_with_switching(nc, y, topo, mode, options);
}

}  // namespace gridpf
