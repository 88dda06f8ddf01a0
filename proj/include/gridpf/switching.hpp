#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gridpf/paths.hpp"
#include "gridpf/solver.hpp"
#include "gridpf/violations.hpp"

namespace gridpf {

enum class SwitchMode { baseline, qlim, ppqv_batch, ppqv_incremental };

const char* to_string(SwitchMode m);
std::optional<SwitchMode> parse_switch_mode(const std::string& s);

struct OuterOptions {
    SolveOptions solve;
    int max_hops = 8;
    int outer_cap = 20;
};

struct IterationRecord {
    BusTypeAssignment assignment;
    SolveOutcome outcome;
    ViolationReport report;
};

struct PairSelection {
    int pqv_bus = -1, p_bus = -1;  // internal indices
    std::vector<int> path;
};

struct SwitchingResult {
    PowerFlowState final_state;
    ViolationReport final_report;
    BusTypeAssignment final_assignment;
    SolveStatus final_status = SolveStatus::diverged;
    int final_iteration = 0;        // 1-based outer iteration the result came from
    int outer_iterations = 0;
    int ppqv_switches = 0;
    int q_switches = 0;
    int resolved_v_violations = 0;  // baseline load-V count minus final, floored at 0
    bool first_diverged = false;    // very first solve failed: no state guarantee
    bool used_fallback = false;     // a later solve failed; best prior iterate returned
    std::vector<IterationRecord> history;
    double wall_time = 0.0;  // seconds

    bool feasible() const {
        return !first_diverged && final_status == SolveStatus::converged &&
               final_report.feasible();
    }
};

// Every gen_q-violated PV bus becomes PQ with spec_q clamped to the violated
// bound and its V setpoint discarded; all in one pass. A violated Vtheta bus
// is skipped (nothing can absorb the system imbalance in its place) and
// reported through *skipped_slack. Returns the switched bus indices.
std::vector<int> enforce_q_limits(const ViolationReport& report,
                                  const NetworkCase& nc, BusTypeAssignment& a,
                                  bool* skipped_slack = nullptr);

// Violated load buses processed smallest violation first; each takes the
// available PV donor with the shortest catalog path; every bus on a chosen
// path is then removed from all remaining entries. Ties: bus index, then
// donor index.
std::vector<PairSelection> select_ppqv_pairs(const ViolationReport& report,
                                             const PathCatalog& catalog);

// pqv_bus PQ -> PQV with spec_v clamped to its violated bound; p_bus PV -> P,
// voltage setpoint discarded, spec_p retained. Throws CaseError when the
// type preconditions do not hold.
void apply_ppqv_switch(const PairSelection& sel, const NetworkCase& nc,
                       const ViolationReport& report, BusTypeAssignment& a);

// Outer orchestration loop: solve, classify violations, switch, re-solve.
// baseline stops after one solve; qlim adds reactive-limit switching;
// ppqv_batch applies all selected pairs per iteration, ppqv_incremental only
// the first. On a mid-run divergence, and at any non-feasible terminal exit
// of the ppqv modes, the best converged iterate on record is returned. The
// ppqv modes rank load-voltage figures first and admit an iterate only if it
// is no worse than the first solve on both total violation count and summed
// load-voltage excursion; qlim ranks enforced reactive limits first.
SwitchingResult run_with_switching(const NetworkCase& nc,
                                   const AdmittanceMatrix& y,
                                   const Topology& topo, SwitchMode mode,
                                   const OuterOptions& options);

// Convenience overload building the electrical model internally.
SwitchingResult run_with_switching(const NetworkCase& nc, SwitchMode mode,
                                   const OuterOptions& options);

}  // namespace gridpf
