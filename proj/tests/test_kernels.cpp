#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gridpf/kernels.hpp"
#include "gridpf/network.hpp"
#include "gridpf/solver.hpp"
#include "helpers.hpp"

using namespace gridpf;

namespace {

struct RandomCsr {
    int n = 0;
    std::vector<int> row_ptr, col_idx;
    std::vector<double> g, b;
};

// random structurally-symmetric-ish pattern with a guaranteed diagonal
RandomCsr make_random_csr(int n, double density, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    RandomCsr m;
    m.n = n;
    m.row_ptr.push_back(0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i && coin(rng) > density) continue;
            m.col_idx.push_back(j);
            m.g.push_back(val(rng));
            m.b.push_back(val(rng));
        }
        m.row_ptr.push_back(static_cast<int>(m.col_idx.size()));
    }
    return m;
}

void compare_kernels(int n, const int* rp, const int* ci, const double* g,
                     const double* b, uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> vd(0.9, 1.1);
    std::uniform_real_distribution<double> td(-0.5, 0.5);
    std::vector<double> e(n), f(n);
    for (int k = 0; k < n; ++k) {
        const double v = vd(rng), th = td(rng);
        e[k] = v * std::cos(th);
        f[k] = v * std::sin(th);
    }
    std::vector<double> p0(n), q0(n), p1(n), q1(n);
    kernels::injections_scalar(n, rp, ci, g, b, e.data(), f.data(), p0.data(),
                               q0.data());
    kernels::select_injection_kernel()(n, rp, ci, g, b, e.data(), f.data(),
                                       p1.data(), q1.data());
    for (int k = 0; k < n; ++k) {
        const double scale = std::max({1.0, std::abs(p0[k]), std::abs(q0[k])});
        CHECK(std::abs(p0[k] - p1[k]) / scale < 1e-12);
        CHECK(std::abs(q0[k] - q1[k]) / scale < 1e-12);
    }
}

}  // namespace

TEST_CASE("kernel dispatch returns a named implementation") {
    CHECK(kernels::select_injection_kernel() != nullptr);
    const std::string name = kernels::active_kernel_name();
    CHECK((name == "scalar" || name == "avx2"));
}

TEST_CASE("selected kernel agrees with the scalar reference on random data") {
    for (uint32_t seed : {1u, 2u, 3u, 4u}) {
        // sizes straddle the vector width so tails of every length occur
        for (int n : {1, 2, 3, 5, 8, 17, 64}) {
            RandomCsr m = make_random_csr(n, 0.4, seed * 100 + n);
            compare_kernels(m.n, m.row_ptr.data(), m.col_idx.data(),
                            m.g.data(), m.b.data(), seed);
        }
    }
}

TEST_CASE("selected kernel agrees with scalar on real grid structures") {
    for (const char* name : {"case14.m", "case57.m", "case300.m"}) {
        NetworkCase nc = testutil::load_case(name);
        AdmittanceMatrix y = build_ybus(nc);
        compare_kernels(y.n, y.row_ptr.data(), y.col_idx.data(), y.g.data(),
                        y.b.data(), 7);
    }
}

TEST_CASE("injections at the reference solution match the fixture") {
    NetworkCase nc = testutil::load_case("case14.m");
    AdmittanceMatrix y = build_ybus(nc);
    auto fx = nlohmann::json::parse(
        testutil::read_file(testutil::fixture_path("ref_case14.json")));
    std::vector<double> v, theta;
    for (const auto& x : fx.at("vm")) v.push_back(x.get<double>());
    for (const auto& x : fx.at("va")) theta.push_back(x.get<double>());
    std::vector<double> p, q;
    calc_injections(y, v, theta, p, q);
    const auto& pr = fx.at("p_calc");
    const auto& qr = fx.at("q_calc");
    for (int k = 0; k < y.n; ++k) {
        CHECK(p[k] == doctest::Approx(pr[k].get<double>()).epsilon(1e-6));
        CHECK(q[k] == doctest::Approx(qr[k].get<double>()).epsilon(1e-6));
    }
}

TEST_CASE("flat voltage on a lossless tap-free network carries no flow") {
    std::string text = R"(mpc.baseMVA = 100;
mpc.bus = [
    1 3 0  0 0 0 1 1.0 0 230 1 1.1 0.9;
    2 1 10 2 0 0 1 1.0 0 230 1 1.1 0.9;
    3 1 10 2 0 0 1 1.0 0 230 1 1.1 0.9;
];
mpc.gen = [ 1 20 0 50 -50 1.0 100 1 100 0; ];
mpc.branch = [
    1 2 0 0.1 0 0 0 0 0 0 1 -360 360;
    2 3 0 0.2 0 0 0 0 0 0 1 -360 360;
];
)";
    NetworkCase nc = parse_matpower_case(text, "lossless");
    AdmittanceMatrix y = build_ybus(nc);
    std::vector<double> v(3, 1.0), theta(3, 0.0), p, q;
    calc_injections(y, v, theta, p, q);
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(p[k]) < 1e-14);
        CHECK(std::abs(q[k]) < 1e-14);
    }
}
