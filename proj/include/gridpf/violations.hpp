#pragma once

#include <vector>

#include "gridpf/network.hpp"
#include "gridpf/solver.hpp"

namespace gridpf {

struct Violation {
    int bus = -1;           // internal index
    double bound = 0.0;     // the violated bound, p.u.
    double magnitude = 0.0; // distance to that bound, > 0
    bool upper = false;
};

// Classified strict bound violations. A value exactly on a bound is feasible.
struct ViolationReport {
    std::vector<Violation> gen_q;   // generator reactive power outside [qmin, qmax]
    std::vector<Violation> gen_v;   // V out of bounds at gen-origin buses whose V is unfixed
    std::vector<Violation> load_v;  // V out of bounds at load-origin buses not currently PQV

    bool feasible() const {
        return gen_q.empty() && gen_v.empty() && load_v.empty();
    }
    int total_count() const {
        return static_cast<int>(gen_q.size() + gen_v.size() + load_v.size());
    }
    double total_magnitude() const;
    // Summed |V| exceedance over both voltage classes.
    double v_magnitude() const;
    // Summed |V| exceedance over load buses alone; the headline statistic.
    // A demoted generator's excursion is the price of a switch, not part of
    // the load-voltage figure of merit.
    double load_v_magnitude() const;
    int v_count() const {
        return static_cast<int>(gen_v.size() + load_v.size());
    }
    // Count excluding reactive violations at the slack bus, which no switch
    // can resolve.
    int switchable_gen_q_count(const BusTypeAssignment& a) const;
};

// Scans a completed solve. gen_q covers buses currently PV; the slack is
// exempt (its reactive output is the balance residual, which no switch can
// repair) and clamped Q-switched buses sit on their bound, so neither is
// listed. gen_v covers gen-origin buses whose V is no longer fixed (P buses
// and Q-switched buses); load_v covers load-origin buses not currently PQV.
ViolationReport check_violations(const PowerFlowState& state,
                                 const NetworkCase& nc,
                                 const BusTypeAssignment& a,
                                 const GenBounds& bounds);

}  // namespace gridpf
