#include <doctest.h>
#include <json.hpp>

#include <cmath>

#include "gridpf/switching.hpp"
#include "helpers.hpp"

using namespace gridpf;

namespace {

struct Net {
    NetworkCase nc;
    AdmittanceMatrix y;
    Topology topo;
    BusTypeAssignment a;
    GenBounds bounds;
};

Net load14() {
    Net n{testutil::load_case("case14.m"), {}, {}, {}, {}};
    n.y = build_ybus(n.nc);
    n.topo = adjacency(n.nc);
    n.a = classify_buses(n.nc);
    n.bounds = aggregate_gen_bounds(n.nc);
    return n;
}

Violation viol(int bus, double bound, double magnitude, bool upper) {
    return Violation{bus, bound, magnitude, upper};
}

}  // namespace

TEST_CASE("mode names round-trip") {
    for (SwitchMode m : {SwitchMode::baseline, SwitchMode::qlim,
                         SwitchMode::ppqv_batch, SwitchMode::ppqv_incremental}) {
        auto parsed = parse_switch_mode(to_string(m));
        REQUIRE(parsed.has_value());
        CHECK(*parsed == m);
    }
    CHECK(parse_switch_mode("ppqv-prime") == SwitchMode::ppqv_incremental);
    CHECK_FALSE(parse_switch_mode("nonsense").has_value());
}

TEST_CASE("reactive limit enforcement clamps and relabels") {
    Net n = load14();
    const int b3 = n.nc.index_of(3), b6 = n.nc.index_of(6);
    ViolationReport rep;
    rep.gen_q.push_back(viol(b3, 0.40, 0.05, true));    // over qmax
    rep.gen_q.push_back(viol(b6, -0.06, 0.02, false));  // under qmin

    bool skipped = true;
    std::vector<int> switched = enforce_q_limits(rep, n.nc, n.a, &skipped);
    CHECK_FALSE(skipped);
    CHECK(switched == std::vector<int>{b3, b6});

    CHECK(n.a.types[b3] == BusType::PQ);
    CHECK(n.a.q_switched[b3] == 1);
    // net injection target: clamped generation minus the local load
    CHECK(n.a.spec_q[b3] ==
          doctest::Approx(0.40 - n.nc.buses[b3].qd / n.nc.base_mva));
    CHECK(n.a.types[b6] == BusType::PQ);
    CHECK(n.a.spec_q[b6] ==
          doctest::Approx(-0.06 - n.nc.buses[b6].qd / n.nc.base_mva));
    CHECK(n.a.balanced());
}

TEST_CASE("a violated slack is reported but never switched") {
    Net n = load14();
    ViolationReport rep;
    rep.gen_q.push_back(viol(n.a.slack, 0.10, 0.07, true));
    bool skipped = false;
    std::vector<int> switched = enforce_q_limits(rep, n.nc, n.a, &skipped);
    CHECK(switched.empty());
    CHECK(skipped);
    CHECK(n.a.types[n.a.slack] == BusType::Vtheta);
}

TEST_CASE("pair selection walks violations small to large") {
    Net n = load14();
    PathCatalog cat = build_path_catalog(n.topo, n.a, 8);
    const int b4 = n.nc.index_of(4), b5 = n.nc.index_of(5),
              b7 = n.nc.index_of(7);

    ViolationReport rep;
    rep.load_v.push_back(viol(b5, 1.06, 0.03, true));
    rep.load_v.push_back(viol(b7, 1.06, 0.01, true));
    rep.load_v.push_back(viol(b4, 1.06, 0.02, true));

    std::vector<PairSelection> sel = select_ppqv_pairs(rep, cat);
    // b7 first (smallest violation) -> donor 8; then b4 -> donor 3 over the
    // direct edge; b5's only entry went through b4, which is claimed by then
    REQUIRE(sel.size() == 2);
    CHECK(sel[0].pqv_bus == b7);
    CHECK(sel[0].p_bus == n.nc.index_of(8));
    CHECK(sel[1].pqv_bus == b4);
    CHECK(sel[1].p_bus == n.nc.index_of(3));
}

TEST_CASE("a claimed path blocks every entry that crosses it") {
    Net n = load14();
    PathCatalog cat = build_path_catalog(n.topo, n.a, 8);
    const int b4 = n.nc.index_of(4), b5 = n.nc.index_of(5);

    // b4 goes first (smaller violation) and its path claims buses 4 and 3;
    // b5's route 5-4-3 dies twice over, so only one pair comes back
    ViolationReport rep;
    rep.load_v.push_back(viol(b4, 1.06, 0.01, true));
    rep.load_v.push_back(viol(b5, 1.06, 0.02, true));
    std::vector<PairSelection> sel = select_ppqv_pairs(rep, cat);
    REQUIRE(sel.size() == 1);
    CHECK(sel[0].pqv_bus == b4);
    CHECK(sel[0].path.size() == 2);
}

TEST_CASE("magnitude ties fall back to the bus index") {
    Net n = load14();
    PathCatalog cat = build_path_catalog(n.topo, n.a, 8);
    const int b4 = n.nc.index_of(4), b7 = n.nc.index_of(7);
    ViolationReport rep;
    rep.load_v.push_back(viol(b7, 1.06, 0.02, true));
    rep.load_v.push_back(viol(b4, 1.06, 0.02, true));
    std::vector<PairSelection> sel = select_ppqv_pairs(rep, cat);
    REQUIRE(sel.size() == 2);
    CHECK(sel[0].pqv_bus == b4);  // lower index breaks the tie
    CHECK(sel[1].pqv_bus == b7);
}

TEST_CASE("violated buses without a catalog entry are passed over") {
    Net n = load14();
    PathCatalog cat = build_path_catalog(n.topo, n.a, 8);
    ViolationReport rep;
    rep.load_v.push_back(viol(n.nc.index_of(14), 1.06, 0.02, true));
    CHECK(select_ppqv_pairs(rep, cat).empty());
}

TEST_CASE("applying a pair pins the bound and frees the donor") {
    Net n = load14();
    const int b7 = n.nc.index_of(7), b8 = n.nc.index_of(8);
    ViolationReport rep;
    rep.load_v.push_back(viol(b7, 1.06, 0.0015, true));
    PairSelection sel{b7, b8, {b7, b8}};
    apply_ppqv_switch(sel, n.nc, rep, n.a);
    CHECK(n.a.types[b7] == BusType::PQV);
    CHECK(n.a.spec_v[b7] == 1.06);
    CHECK(n.a.types[b8] == BusType::P);
    CHECK(n.a.spec_p[b8] == doctest::Approx(0.0));  // its dispatch stands
    CHECK(n.a.balanced());

    // the same pair cannot be applied twice
    CHECK_THROWS_AS(apply_ppqv_switch(sel, n.nc, rep, n.a), CaseError);
}

TEST_CASE("apply rejects wrong current types") {
    Net n = load14();
    ViolationReport rep;
    rep.load_v.push_back(viol(n.nc.index_of(7), 1.06, 0.01, true));
    PairSelection pv_as_target{n.nc.index_of(8), n.nc.index_of(3), {}};
    CHECK_THROWS_AS(apply_ppqv_switch(pv_as_target, n.nc, rep, n.a), CaseError);
    PairSelection load_as_donor{n.nc.index_of(7), n.nc.index_of(9), {}};
    CHECK_THROWS_AS(apply_ppqv_switch(load_as_donor, n.nc, rep, n.a), CaseError);
}

TEST_CASE("baseline mode is a single plain solve") {
    Net n = load14();
    OuterOptions opt;
    SwitchingResult r = run_with_switching(n.nc, n.y, n.topo,
                                           SwitchMode::baseline, opt);
    SolveOutcome bare = nr_solve(n.y, n.a, opt.solve);
    REQUIRE(r.final_status == SolveStatus::converged);
    CHECK(r.outer_iterations == 1);
    CHECK(r.q_switches == 0);
    CHECK(r.ppqv_switches == 0);
    CHECK(r.history.size() == 1);
    for (int k = 0; k < n.nc.n_bus(); ++k) {
        CHECK(r.final_state.v[k] == bare.state.v[k]);
        CHECK(r.final_state.theta[k] == bare.state.theta[k]);
    }
    // stock case14: the bus 8 setpoint pushes V7 above its ceiling, so
    // baseline is infeasible
    CHECK_FALSE(r.final_report.feasible());
    CHECK(r.final_report.load_v.size() >= 1);
}

TEST_CASE("the convenience overload matches the explicit one") {
    Net n = load14();
    OuterOptions opt;
    SwitchingResult a = run_with_switching(n.nc, n.y, n.topo,
                                           SwitchMode::ppqv_batch, opt);
    SwitchingResult b = run_with_switching(n.nc, SwitchMode::ppqv_batch, opt);
    CHECK(a.final_status == b.final_status);
    CHECK(a.outer_iterations == b.outer_iterations);
    CHECK(a.final_iteration == b.final_iteration);
    for (int k = 0; k < n.nc.n_bus(); ++k)
        CHECK(a.final_state.v[k] == b.final_state.v[k]);
}

TEST_CASE("a feasible first solve exits every mode at once") {
    // stock demand, relaxed voltage ceilings: every bus sits below 1.10 and
    // every non-slack generator is inside its reactive band, so iteration one
    // is already clean
    NetworkCase nc = testutil::load_case("case14.m");
    for (BusRecord& b : nc.buses) b.vmax = 1.10;
    AdmittanceMatrix y = build_ybus(nc);
    Topology topo = adjacency(nc);
    OuterOptions opt;
    for (SwitchMode m : {SwitchMode::baseline, SwitchMode::qlim,
                         SwitchMode::ppqv_batch, SwitchMode::ppqv_incremental}) {
        CAPTURE(to_string(m));
        SwitchingResult r = run_with_switching(nc, y, topo, m, opt);
        REQUIRE(r.final_status == SolveStatus::converged);
        CHECK(r.feasible());
        CHECK(r.outer_iterations == 1);
        CHECK(r.q_switches == 0);
        CHECK(r.ppqv_switches == 0);
        CHECK(r.final_iteration == 1);
    }
}

TEST_CASE("stock 14-bus under the pairing modes") {
    Net n = load14();
    OuterOptions opt;
    for (SwitchMode m : {SwitchMode::ppqv_batch, SwitchMode::ppqv_incremental}) {
        CAPTURE(to_string(m));
        SwitchingResult r = run_with_switching(n.nc, n.y, n.topo, m, opt);
        REQUIRE(r.final_status == SolveStatus::converged);
        CHECK_FALSE(r.first_diverged);
        // the V7 excess gets paired away at the cost of the bus 8 donor
        // floating above its ceiling, so the run ends strictly better on the
        // load side
        CHECK(r.ppqv_switches >= 1);
        CHECK(r.history.size() >= 2);
        REQUIRE(!r.history.empty());
        const ViolationReport& first = r.history.front().report;
        CHECK(r.final_report.total_count() <= first.total_count());
        CHECK(r.final_report.load_v.size() <= first.load_v.size());
        // terminal pick must never lose to any converged iterate on counts
        for (const IterationRecord& it : r.history) {
            if (it.outcome.status != SolveStatus::converged) continue;
            CHECK(r.final_report.total_count() <= it.report.total_count());
        }
    }
}

TEST_CASE("reactive switching holds the clamped bus on its bound") {
    // push the bus 6 generator band to zero so qlim must act
    NetworkCase nc = testutil::load_case("case14.m");
    for (GenRecord& g : nc.gens)
        if (g.bus == 6) {
            g.qmax = 0.0;
            g.qmin = 0.0;
        }
    AdmittanceMatrix y = build_ybus(nc);
    Topology topo = adjacency(nc);
    OuterOptions opt;
    SwitchingResult r = run_with_switching(nc, y, topo, SwitchMode::qlim, opt);
    REQUIRE(r.final_status == SolveStatus::converged);
    CHECK(r.q_switches >= 1);
    const int b6 = nc.index_of(6);
    CHECK(r.final_assignment.types[b6] == BusType::PQ);
    CHECK(r.final_assignment.q_switched[b6] == 1);
    // reported bus injection equals the clamp exactly
    CHECK(r.final_state.q[b6] == r.final_assignment.spec_q[b6]);
    const double q_gen = r.final_state.q[b6] + nc.buses[b6].qd / nc.base_mva;
    CHECK(std::abs(q_gen - 0.0) < 1e-12);
    // and its magnitude is no longer pinned to the old setpoint
    CHECK(r.final_state.v[b6] != doctest::Approx(1.07).epsilon(1e-12));
}

TEST_CASE("outer loop respects the iteration cap") {
    Net n = load14();
    OuterOptions opt;
    opt.outer_cap = 1;
    SwitchingResult r = run_with_switching(n.nc, n.y, n.topo,
                                           SwitchMode::ppqv_batch, opt);
    CHECK(r.outer_iterations == 1);
    CHECK(r.history.size() == 1);
    REQUIRE(r.final_status == SolveStatus::converged);
}

TEST_CASE("first-solve divergence is flagged with no state guarantee") {
    NetworkCase nc = testutil::load_case("case14.m");
    for (BusRecord& b : nc.buses) {
        b.pd *= 20.0;
        b.qd *= 20.0;
    }
    AdmittanceMatrix y = build_ybus(nc);
    Topology topo = adjacency(nc);
    OuterOptions opt;
    SwitchingResult r = run_with_switching(nc, y, topo, SwitchMode::ppqv_batch, opt);
    CHECK(r.first_diverged);
    CHECK_FALSE(r.feasible());
    CHECK(r.final_status != SolveStatus::converged);
}

TEST_CASE("frozen light-load snapshot end to end") {
    // pinned demand and dispatch; every stage of the pipeline fires: a
    // reactive clamp at bus 3, then one pairing that clears the whole
    // four-bus overvoltage pocket around bus 8
    NetworkCase nc = testutil::load_case("case14.m");
    const nlohmann::json snap = nlohmann::json::parse(
        testutil::read_file(testutil::fixture_path("scenario14_light.json")));
    for (size_t k = 0; k < nc.buses.size(); ++k) {
        nc.buses[k].pd = snap.at("pd")[k].get<double>();
        nc.buses[k].qd = snap.at("qd")[k].get<double>();
    }
    for (size_t i = 0; i < nc.gens.size(); ++i)
        nc.gens[i].pg = snap.at("pg")[i].get<double>();
    AdmittanceMatrix y = build_ybus(nc);
    Topology topo = adjacency(nc);
    OuterOptions opt;
    const int b3 = nc.index_of(3), b7 = nc.index_of(7), b8 = nc.index_of(8);

    SwitchingResult base =
        run_with_switching(nc, y, topo, SwitchMode::baseline, opt);
    REQUIRE(base.final_status == SolveStatus::converged);
    REQUIRE(base.final_report.gen_q.size() == 1);
    CHECK(base.final_report.gen_q[0].bus == b3);
    CHECK_FALSE(base.final_report.gen_q[0].upper);  // under its floor
    REQUIRE(base.final_report.load_v.size() == 4);
    const int over[] = {7, 9, 10, 11};
    for (size_t i = 0; i < 4; ++i) {
        CHECK(base.final_report.load_v[i].bus == nc.index_of(over[i]));
        CHECK(base.final_report.load_v[i].upper);
    }
    CHECK(base.final_report.load_v_magnitude() ==
          doctest::Approx(0.016389).epsilon(1e-3));

    SwitchingResult q = run_with_switching(nc, y, topo, SwitchMode::qlim, opt);
    REQUIRE(q.final_status == SolveStatus::converged);
    CHECK_FALSE(q.used_fallback);
    CHECK(q.q_switches == 1);
    CHECK(q.outer_iterations == 2);
    CHECK(q.final_assignment.types[b3] == BusType::PQ);
    CHECK(q.final_assignment.q_switched[b3] == 1);
    CHECK(q.final_state.q[b3] == q.final_assignment.spec_q[b3]);
    CHECK(q.final_report.gen_q.empty());
    // the clamp fixes reactive limits but leaves the overvoltages standing
    CHECK(q.final_report.load_v.size() == 4);

    for (SwitchMode m :
         {SwitchMode::ppqv_batch, SwitchMode::ppqv_incremental}) {
        CAPTURE(to_string(m));
        SwitchingResult r = run_with_switching(nc, y, topo, m, opt);
        REQUIRE(r.final_status == SolveStatus::converged);
        CHECK_FALSE(r.used_fallback);
        CHECK(r.outer_iterations == 3);
        CHECK(r.final_iteration == 3);
        CHECK(r.q_switches == 1);
        CHECK(r.ppqv_switches == 1);
        CHECK(r.resolved_v_violations == 4);
        // bus 7 pinned on its ceiling, bus 8 demoted to make that possible
        CHECK(r.final_assignment.types[b7] == BusType::PQV);
        CHECK(r.final_assignment.types[b8] == BusType::P);
        CHECK(r.final_state.v[b7] == nc.buses[b7].vmax);
        CHECK(r.final_state.v[b8] == doctest::Approx(1.070904).epsilon(1e-4));
        // load side fully clean; the donor's excursion is the only leftover
        CHECK(r.final_report.gen_q.empty());
        CHECK(r.final_report.load_v.empty());
        REQUIRE(r.final_report.gen_v.size() == 1);
        CHECK(r.final_report.gen_v[0].bus == b8);
        CHECK_FALSE(r.feasible());
        CHECK(r.final_report.load_v_magnitude() == 0.0);
    }
}
