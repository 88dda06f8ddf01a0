#include "gridpf/network.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>

namespace gridpf {

const char* to_string(BusType t) {
    switch (t) {
        case BusType::PQ: return "PQ";
        case BusType::PV: return "PV";
        case BusType::Vtheta: return "Vtheta";
        case BusType::P: return "P";
        case BusType::PQV: return "PQV";
    }
    return "?";
}

int BusTypeAssignment::count(BusType t) const {
    return static_cast<int>(std::count(types.begin(), types.end(), t));
}

AdmittanceMatrix build_ybus(const NetworkCase& nc) {
    const int n = nc.n_bus();
    using cplx = std::complex<double>;
    // accumulate into per-row ordered maps, then flatten to CSR
    std::vector<std::map<int, cplx>> rows(n);
    for (int k = 0; k < n; ++k) rows[k][k] = cplx(0.0, 0.0);

    for (const BranchRecord& br : nc.branches) {
        if (!br.status) continue;
        const int f = nc.index_of(br.from_bus);
        const int t = nc.index_of(br.to_bus);
        if (br.r == 0.0 && br.x == 0.0)
            throw CaseError("in-service branch " + std::to_string(br.from_bus) +
                            "-" + std::to_string(br.to_bus) +
                            " has zero impedance");
        const cplx ys = 1.0 / cplx(br.r, br.x);
        const double tau = br.tap == 0.0 ? 1.0 : br.tap;
        const double sigma = br.shift * std::numbers::pi / 180.0;
        const cplx ytt = ys + cplx(0.0, br.b_charge / 2.0);
        const cplx yff = ytt / (tau * tau);
        const cplx yft = -ys / (tau * std::exp(cplx(0.0, -sigma)));
        const cplx ytf = -ys / (tau * std::exp(cplx(0.0, sigma)));
        rows[f][f] += yff;
        rows[t][t] += ytt;
        rows[f][t] += yft;
        rows[t][f] += ytf;
    }
    for (int k = 0; k < n; ++k)
        rows[k][k] += cplx(nc.buses[k].gs, nc.buses[k].bs) / nc.base_mva;

    AdmittanceMatrix y;
    y.n = n;
    y.row_ptr.assign(n + 1, 0);
    y.diag.assign(n, -1);
    for (int k = 0; k < n; ++k) y.row_ptr[k + 1] = y.row_ptr[k] +
                                                   static_cast<int>(rows[k].size());
    y.col_idx.reserve(y.row_ptr[n]);
    y.g.reserve(y.row_ptr[n]);
    y.b.reserve(y.row_ptr[n]);
    for (int k = 0; k < n; ++k) {
        for (const auto& [j, v] : rows[k]) {
            if (j == k) y.diag[k] = static_cast<int>(y.col_idx.size());
            y.col_idx.push_back(j);
            y.g.push_back(v.real());
            y.b.push_back(v.imag());
        }
    }
    return y;
}

Topology adjacency(const NetworkCase& nc) {
    Topology topo;
    topo.adjacency.assign(nc.n_bus(), {});
    for (const BranchRecord& br : nc.branches) {
        if (!br.status) continue;
        int f = nc.index_of(br.from_bus);
        int t = nc.index_of(br.to_bus);
        if (f == t) continue;
        topo.adjacency[f].push_back(t);
        topo.adjacency[t].push_back(f);
    }
    for (auto& nbrs : topo.adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return topo;
}

BusTypeAssignment classify_buses(const NetworkCase& nc) {
    const int n = nc.n_bus();
    BusTypeAssignment a;
    a.types.assign(n, BusType::PQ);
    a.spec_p.assign(n, 0.0);
    a.spec_q.assign(n, 0.0);
    a.spec_v.assign(n, 1.0);
    a.origin.assign(n, BusOrigin::Load);
    a.q_switched.assign(n, 0);

    std::vector<double> pg(n, 0.0);
    std::vector<double> vset(n, 0.0);
    std::vector<uint8_t> has_gen(n, 0);
    for (const GenRecord& g : nc.gens) {
        if (!g.status) continue;
        int k = nc.index_of(g.bus);
        pg[k] += g.pg;
        if (!has_gen[k]) vset[k] = g.vg;
        has_gen[k] = 1;
    }

    for (int k = 0; k < n; ++k) {
        const BusRecord& bus = nc.buses[k];
        if (bus.matpower_type == 3) {
            if (!has_gen[k])
                throw CaseError("reference bus " + std::to_string(bus.id) +
                                " has no in-service generator");
            if (a.slack >= 0)
                throw CaseError("more than one reference bus");
            a.slack = k;
            a.types[k] = BusType::Vtheta;
            a.spec_v[k] = vset[k];
            a.origin[k] = BusOrigin::Slack;
        } else if (bus.matpower_type == 2 && has_gen[k]) {
            a.types[k] = BusType::PV;
            a.spec_p[k] = (pg[k] - bus.pd) / nc.base_mva;
            a.spec_v[k] = vset[k];
            a.origin[k] = BusOrigin::Gen;
        } else {
            a.types[k] = BusType::PQ;
            a.spec_p[k] = -bus.pd / nc.base_mva;
            a.spec_q[k] = -bus.qd / nc.base_mva;
            a.origin[k] = BusOrigin::Load;
        }
    }
    if (a.slack < 0) throw CaseError("no reference bus");
    return a;
}

GenBounds aggregate_gen_bounds(const NetworkCase& nc) {
    const int n = nc.n_bus();
    GenBounds gb;
    gb.qmin.assign(n, 0.0);
    gb.qmax.assign(n, 0.0);
    gb.has_gen.assign(n, 0);
    for (const GenRecord& g : nc.gens) {
        if (!g.status) continue;
        int k = nc.index_of(g.bus);
        gb.qmin[k] += g.qmin / nc.base_mva;
        gb.qmax[k] += g.qmax / nc.base_mva;
        gb.has_gen[k] = 1;
    }
    return gb;
}

}  // namespace gridpf
