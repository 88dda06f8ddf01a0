#pragma once

#include <cstdint>
#include <vector>

#include "gridpf/case.hpp"

namespace gridpf {

// Sparse bus admittance matrix, CSR, one shared pattern for the real part g
// and imaginary part b. Structurally symmetric: (i,j) present iff (j,i) is,
// even when phase shifters make the values asymmetric.
struct AdmittanceMatrix {
    int n = 0;
    std::vector<int> row_ptr;   // size n+1
    std::vector<int> col_idx;   // size nnz, ascending within each row
    std::vector<double> g, b;   // size nnz
    std::vector<int> diag;      // index into col_idx/g/b of (k,k), size n

    int nnz() const { return static_cast<int>(col_idx.size()); }
};

// Undirected neighbor lists over in-service branches; parallel branches
// collapsed, no self-loops, sorted ascending.
struct Topology {
    std::vector<std::vector<int>> adjacency;
};

enum class BusType : uint8_t { PQ, PV, Vtheta, P, PQV };

// Where a bus started out; drives violation classification after switches.
enum class BusOrigin : uint8_t { Load, Gen, Slack };

const char* to_string(BusType t);

// Per-bus type labels plus the specified quantities they imply (p.u.).
// spec arrays are meaningful only where the type rules say so:
//   PQ {P,Q}, PV {P,V}, Vtheta {V, theta=0}, P {P}, PQV {P,Q,V}.
struct BusTypeAssignment {
    std::vector<BusType> types;
    std::vector<double> spec_p, spec_q, spec_v;
    std::vector<BusOrigin> origin;
    std::vector<uint8_t> q_switched;  // PV->PQ via reactive-limit clamping
    int slack = -1;

    int n() const { return static_cast<int>(types.size()); }
    int count(BusType t) const;
    bool balanced() const { return count(BusType::P) == count(BusType::PQV); }
    bool has_p(int k) const { return types[k] != BusType::Vtheta; }
    bool has_q(int k) const {
        return types[k] == BusType::PQ || types[k] == BusType::PQV;
    }
    bool has_v(int k) const {
        return types[k] == BusType::PV || types[k] == BusType::Vtheta ||
               types[k] == BusType::PQV;
    }
};

// Standard pi-model with off-nominal tap and phase shift; bus shunts on the
// diagonal after division by base MVA. Throws CaseError for an in-service
// branch with r = x = 0.
AdmittanceMatrix build_ybus(const NetworkCase& nc);

Topology adjacency(const NetworkCase& nc);

// MATPOWER type 3 -> Vtheta, type 2 with an in-service generator -> PV,
// everything else -> PQ. Injections netted per-unit: generation minus local
// load. Never produces P or PQV labels.
BusTypeAssignment classify_buses(const NetworkCase& nc);

// Aggregated generator reactive bounds per bus, p.u. (sum over in-service
// units; buses without generators get [0, 0] and has_gen false).
struct GenBounds {
    std::vector<double> qmin, qmax;
    std::vector<uint8_t> has_gen;
};
GenBounds aggregate_gen_bounds(const NetworkCase& nc);

}  // namespace gridpf
