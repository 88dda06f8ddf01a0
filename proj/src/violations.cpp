#include "gridpf/violations.hpp"

namespace gridpf {

double ViolationReport::total_magnitude() const {
    double s = 0.0;
    for (const auto& v : gen_q) s += v.magnitude;
    for (const auto& v : gen_v) s += v.magnitude;
    for (const auto& v : load_v) s += v.magnitude;
    return s;
}

double ViolationReport::v_magnitude() const {
    double s = 0.0;
    for (const auto& v : gen_v) s += v.magnitude;
    for (const auto& v : load_v) s += v.magnitude;
    return s;
}

double ViolationReport::load_v_magnitude() const {
    double s = 0.0;
    for (const auto& v : load_v) s += v.magnitude;
    return s;
}

int ViolationReport::switchable_gen_q_count(const BusTypeAssignment& a) const {
    int c = 0;
    for (const auto& v : gen_q)
        if (a.types[v.bus] != BusType::Vtheta) ++c;
    return c;
}

namespace {

// strict exceedance only; a value exactly on a bound is feasible
bool check_bounds(double value, double lo, double hi, Violation& out) {
    if (value > hi) {
        out.bound = hi;
        out.magnitude = value - hi;
        out.upper = true;
        return true;
    }
    if (value < lo) {
        out.bound = lo;
        out.magnitude = lo - value;
        out.upper = false;
        return true;
    }
    return false;
}

}  // namespace

ViolationReport check_violations(const PowerFlowState& state,
                                 const NetworkCase& nc,
                                 const BusTypeAssignment& a,
                                 const GenBounds& bounds) {
    ViolationReport rep;
    const int n = a.n();
    for (int k = 0; k < n; ++k) {
        const BusRecord& bus = nc.buses[k];
        const BusType t = a.types[k];
        if (t == BusType::PV) {
            // generator reactive output = net injection plus local demand.
            // the slack is not scanned: its reactive output is the system
            // balance residual, and no switch could repair an exceedance
            const double q_gen = state.q[k] + bus.qd / nc.base_mva;
            Violation v;
            if (check_bounds(q_gen, bounds.qmin[k], bounds.qmax[k], v)) {
                v.bus = k;
                rep.gen_q.push_back(v);
            }
        }
        if (a.origin[k] == BusOrigin::Gen &&
            (t == BusType::P || (t == BusType::PQ && a.q_switched[k]))) {
            Violation v;
            if (check_bounds(state.v[k], bus.vmin, bus.vmax, v)) {
                v.bus = k;
                rep.gen_v.push_back(v);
            }
        }
        if (a.origin[k] == BusOrigin::Load && t != BusType::PQV) {
            Violation v;
            if (check_bounds(state.v[k], bus.vmin, bus.vmax, v)) {
                v.bus = k;
                rep.load_v.push_back(v);
            }
        }
    }
    return rep;
}

}  // namespace gridpf
