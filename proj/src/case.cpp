#include "gridpf/case.hpp"

#include <json.hpp>

namespace gridpf {

using ordered_json = nlohmann::ordered_json;

void validate_case(NetworkCase& nc) {
    if (!(nc.base_mva > 0.0)) throw CaseError("baseMVA must be positive");
    if (nc.buses.empty()) throw CaseError("case has no buses");

    nc.bus_index.clear();
    int ref_count = 0;
    for (size_t i = 0; i < nc.buses.size(); ++i) {
        const BusRecord& b = nc.buses[i];
        auto [it, inserted] =
            nc.bus_index.emplace(b.id, static_cast<int>(i));
        if (!inserted)
            throw CaseError("duplicate bus id " + std::to_string(b.id));
        if (b.matpower_type == 3) ++ref_count;
        if (!(b.vmin <= b.vmax))
            throw CaseError("bus " + std::to_string(b.id) + ": vmin > vmax");
        if (!(b.vmin > 0.0))
            throw CaseError("bus " + std::to_string(b.id) + ": vmin <= 0");
    }
    if (ref_count != 1)
        throw CaseError("expected exactly one reference bus, found " +
                        std::to_string(ref_count));

    for (const GenRecord& g : nc.gens) {
        if (!nc.bus_index.count(g.bus))
            throw CaseError("generator references missing bus " +
                            std::to_string(g.bus));
        if (!(g.qmin <= g.qmax))
            throw CaseError("generator at bus " + std::to_string(g.bus) +
                            ": qmin > qmax");
        if (!(g.pmin <= g.pmax))
            throw CaseError("generator at bus " + std::to_string(g.bus) +
                            ": pmin > pmax");
    }
    for (const BranchRecord& br : nc.branches) {
        if (!nc.bus_index.count(br.from_bus))
            throw CaseError("branch references missing bus " +
                            std::to_string(br.from_bus));
        if (!nc.bus_index.count(br.to_bus))
            throw CaseError("branch references missing bus " +
                            std::to_string(br.to_bus));
        if (br.status && br.r == 0.0 && br.x == 0.0)
            throw CaseError("in-service branch " +
                            std::to_string(br.from_bus) + "-" +
                            std::to_string(br.to_bus) +
                            " has zero impedance");
    }
}

std::string case_to_json(const NetworkCase& nc) {
    ordered_json j;
    j["name"] = nc.name;
    j["base_mva"] = nc.base_mva;
    j["buses"] = ordered_json::array();
    for (const BusRecord& b : nc.buses) {
        j["buses"].push_back({{"id", b.id},
                              {"type", b.matpower_type},
                              {"pd", b.pd},
                              {"qd", b.qd},
                              {"gs", b.gs},
                              {"bs", b.bs},
                              {"vm", b.vm},
                              {"va", b.va},
                              {"vmax", b.vmax},
                              {"vmin", b.vmin},
                              {"base_kv", b.base_kv}});
    }
    j["gens"] = ordered_json::array();
    for (const GenRecord& g : nc.gens) {
        j["gens"].push_back({{"bus", g.bus},
                             {"pg", g.pg},
                             {"qg", g.qg},
                             {"qmax", g.qmax},
                             {"qmin", g.qmin},
                             {"vg", g.vg},
                             {"pmax", g.pmax},
                             {"pmin", g.pmin},
                             {"status", g.status}});
    }
    j["branches"] = ordered_json::array();
    for (const BranchRecord& br : nc.branches) {
        j["branches"].push_back({{"from", br.from_bus},
                                 {"to", br.to_bus},
                                 {"r", br.r},
                                 {"x", br.x},
                                 {"b", br.b_charge},
                                 {"tap", br.tap},
                                 {"shift", br.shift},
                                 {"status", br.status}});
    }
    return j.dump(2);
}

NetworkCase case_from_json(const std::string& text) {
    ordered_json j = ordered_json::parse(text);
    NetworkCase nc;
    nc.name = j.at("name").get<std::string>();
    nc.base_mva = j.at("base_mva").get<double>();
    for (const auto& e : j.at("buses")) {
        BusRecord b;
        b.id = e.at("id").get<int>();
        b.matpower_type = e.at("type").get<int>();
        b.pd = e.at("pd").get<double>();
        b.qd = e.at("qd").get<double>();
        b.gs = e.at("gs").get<double>();
        b.bs = e.at("bs").get<double>();
        b.vm = e.at("vm").get<double>();
        b.va = e.at("va").get<double>();
        b.vmax = e.at("vmax").get<double>();
        b.vmin = e.at("vmin").get<double>();
        b.base_kv = e.at("base_kv").get<double>();
        nc.buses.push_back(b);
    }
    for (const auto& e : j.at("gens")) {
        GenRecord g;
        g.bus = e.at("bus").get<int>();
        g.pg = e.at("pg").get<double>();
        g.qg = e.at("qg").get<double>();
        g.qmax = e.at("qmax").get<double>();
        g.qmin = e.at("qmin").get<double>();
        g.vg = e.at("vg").get<double>();
        g.pmax = e.at("pmax").get<double>();
        g.pmin = e.at("pmin").get<double>();
        g.status = e.at("status").get<bool>();
        nc.gens.push_back(g);
    }
    for (const auto& e : j.at("branches")) {
        BranchRecord br;
        br.from_bus = e.at("from").get<int>();
        br.to_bus = e.at("to").get<int>();
        br.r = e.at("r").get<double>();
        br.x = e.at("x").get<double>();
        br.b_charge = e.at("b").get<double>();
        br.tap = e.at("tap").get<double>();
        br.shift = e.at("shift").get<double>();
        br.status = e.at("status").get<bool>();
        nc.branches.push_back(br);
    }
    validate_case(nc);
    return nc;
}

}  // namespace gridpf
