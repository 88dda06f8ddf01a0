#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace gridpf {

// Input-data error (bad file, bad reference, bad value). Carries a
// human-readable location when one is known.
struct CaseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BusRecord {
    int id = 0;
    int matpower_type = 1;  // 1=PQ, 2=PV, 3=ref
    double pd = 0.0, qd = 0.0;  // MW, MVAr demand
    double gs = 0.0, bs = 0.0;  // shunt MW, MVAr at V=1 p.u.
    double vm = 1.0, va = 0.0;  // initial magnitude (p.u.), angle (degrees)
    double vmax = 1.1, vmin = 0.9;
    double base_kv = 0.0;
};

struct GenRecord {
    int bus = 0;
    double pg = 0.0, qg = 0.0;    // MW, MVAr setpoints
    double qmax = 0.0, qmin = 0.0;
    double vg = 1.0;              // voltage setpoint, p.u.
    double pmax = 0.0, pmin = 0.0;
    bool status = true;
};

struct BranchRecord {
    int from_bus = 0, to_bus = 0;
    double r = 0.0, x = 0.0;   // series impedance, p.u.
    double b_charge = 0.0;     // total line charging, p.u.
    double tap = 0.0;          // off-nominal ratio; 0 means 1.0
    double shift = 0.0;        // degrees
    bool status = true;
};

// Immutable parsed grid. Bus ids may be non-contiguous; `index_of` maps an
// external id to the dense internal index used everywhere downstream.
struct NetworkCase {
    std::string name;
    double base_mva = 100.0;
    std::vector<BusRecord> buses;
    std::vector<GenRecord> gens;
    std::vector<BranchRecord> branches;
    std::unordered_map<int, int> bus_index;

    int n_bus() const { return static_cast<int>(buses.size()); }

    int index_of(int bus_id) const {
        auto it = bus_index.find(bus_id);
        if (it == bus_index.end())
            throw CaseError("unknown bus id " + std::to_string(bus_id));
        return it->second;
    }
};

// Rebuilds the id->index map and checks the structural invariants
// (unique ids, one ref bus, valid references, positive base).
void validate_case(NetworkCase& nc);

// Internal JSON form of a case; round-trips losslessly.
std::string case_to_json(const NetworkCase& nc);
NetworkCase case_from_json(const std::string& text);

}  // namespace gridpf
