#include "gridpf/solver.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <vector>

#include "gridpf/kernels.hpp"

namespace gridpf {

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::diverged: return "diverged";
        case SolveStatus::max_iterations: return "max_iterations";
    }
    return "?";
}

UnknownIndex index_unknowns(const BusTypeAssignment& a) {
    const int n = a.n();
    UnknownIndex ix;
    ix.theta_col.assign(n, -1);
    ix.v_col.assign(n, -1);
    ix.p_row.assign(n, -1);
    ix.q_row.assign(n, -1);
    for (int k = 0; k < n; ++k)
        if (a.types[k] != BusType::Vtheta) ix.theta_col[k] = ix.n_theta++;
    for (int k = 0; k < n; ++k)
        if (a.types[k] == BusType::PQ || a.types[k] == BusType::P)
            ix.v_col[k] = ix.n_theta + ix.n_v++;
    for (int k = 0; k < n; ++k)
        if (a.types[k] != BusType::Vtheta) ix.p_row[k] = ix.n_p++;
    for (int k = 0; k < n; ++k)
        if (a.types[k] == BusType::PQ || a.types[k] == BusType::PQV)
            ix.q_row[k] = ix.n_p + ix.n_q++;
    return ix;
}

void calc_injections(const AdmittanceMatrix& y, const std::vector<double>& v,
                     const std::vector<double>& theta,
                     std::vector<double>& p_calc, std::vector<double>& q_calc) {
    const int n = y.n;
    p_calc.resize(n);
    q_calc.resize(n);
    std::vector<double> e(n), f(n);
    for (int k = 0; k < n; ++k) {
        e[k] = v[k] * std::cos(theta[k]);
        f[k] = v[k] * std::sin(theta[k]);
    }
    kernels::select_injection_kernel()(n, y.row_ptr.data(), y.col_idx.data(),
                                       y.g.data(), y.b.data(), e.data(),
                                       f.data(), p_calc.data(), q_calc.data());
}

namespace {

void check_balanced(const BusTypeAssignment& a) {
    if (!a.balanced())
        throw CaseError("unbalanced assignment: " +
                        std::to_string(a.count(BusType::P)) + " P vs " +
                        std::to_string(a.count(BusType::PQV)) +
                        " PQV buses (system not square)");
}

Eigen::VectorXd stack_mismatch(const UnknownIndex& ix,
                               const BusTypeAssignment& a,
                               const std::vector<double>& p_calc,
                               const std::vector<double>& q_calc) {
    Eigen::VectorXd r(ix.n_p + ix.n_q);
    for (int k = 0; k < a.n(); ++k) {
        if (ix.p_row[k] >= 0) r[ix.p_row[k]] = a.spec_p[k] - p_calc[k];
        if (ix.q_row[k] >= 0) r[ix.q_row[k]] = a.spec_q[k] - q_calc[k];
    }
    return r;
}

}  // namespace

Eigen::VectorXd mismatch(const AdmittanceMatrix& y, const BusTypeAssignment& a,
                         const std::vector<double>& v,
                         const std::vector<double>& theta) {
    check_balanced(a);
    const UnknownIndex ix = index_unknowns(a);
    std::vector<double> p_calc, q_calc;
    calc_injections(y, v, theta, p_calc, q_calc);
    return stack_mismatch(ix, a, p_calc, q_calc);
}

// Entries are d(mismatch)/dx = -d(calc)/dx. With th_kj = th_k - th_j:
//   dP_k/dth_j = V_k V_j (G_kj sin th_kj - B_kj cos th_kj)      j != k
//   dP_k/dth_k = -Q_k - B_kk V_k^2
//   dP_k/dV_j  = V_k (G_kj cos th_kj + B_kj sin th_kj)          j != k
//   dP_k/dV_k  = P_k / V_k + G_kk V_k
//   dQ_k/dth_j = -V_k V_j (G_kj cos th_kj + B_kj sin th_kj)     j != k
//   dQ_k/dth_k = P_k - G_kk V_k^2
//   dQ_k/dV_j  = V_k (G_kj sin th_kj - B_kj cos th_kj)          j != k
//   dQ_k/dV_k  = Q_k / V_k - B_kk V_k
Eigen::SparseMatrix<double> jacobian(const AdmittanceMatrix& y,
                                     const BusTypeAssignment& a,
                                     const std::vector<double>& v,
                                     const std::vector<double>& theta) {
    check_balanced(a);
    const UnknownIndex ix = index_unknowns(a);
    const int n = y.n;
    std::vector<double> p_calc, q_calc;
    calc_injections(y, v, theta, p_calc, q_calc);

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(4 * y.nnz());
    for (int k = 0; k < n; ++k) {
        const int pr = ix.p_row[k], qr = ix.q_row[k];
        if (pr < 0 && qr < 0) continue;
        for (int idx = y.row_ptr[k]; idx < y.row_ptr[k + 1]; ++idx) {
            const int j = y.col_idx[idx];
            const double G = y.g[idx], B = y.b[idx];
            double dp_dth, dp_dv, dq_dth, dq_dv;
            if (j == k) {
                dp_dth = -q_calc[k] - B * v[k] * v[k];
                dp_dv = p_calc[k] / v[k] + G * v[k];
                dq_dth = p_calc[k] - G * v[k] * v[k];
                dq_dv = q_calc[k] / v[k] - B * v[k];
            } else {
                const double th = theta[k] - theta[j];
                const double c = std::cos(th), s = std::sin(th);
                const double vv = v[k] * v[j];
                dp_dth = vv * (G * s - B * c);
                dp_dv = v[k] * (G * c + B * s);
                dq_dth = -vv * (G * c + B * s);
                dq_dv = v[k] * (G * s - B * c);
            }
            const int tc = ix.theta_col[j], vc = ix.v_col[j];
            if (pr >= 0) {
                if (tc >= 0) trip.emplace_back(pr, tc, -dp_dth);
                if (vc >= 0) trip.emplace_back(pr, vc, -dp_dv);
            }
            if (qr >= 0) {
                if (tc >= 0) trip.emplace_back(qr, tc, -dq_dth);
                if (vc >= 0) trip.emplace_back(qr, vc, -dq_dv);
            }
        }
    }
    Eigen::SparseMatrix<double> J(ix.dim(), ix.dim());
    J.setFromTriplets(trip.begin(), trip.end());
    return J;
}

PowerFlowState flat_start(const BusTypeAssignment& a) {
    const int n = a.n();
    PowerFlowState st;
    st.v.assign(n, 1.0);
    st.theta.assign(n, 0.0);
    st.p.assign(n, 0.0);
    st.q.assign(n, 0.0);
    for (int k = 0; k < n; ++k)
        if (a.has_v(k)) st.v[k] = a.spec_v[k];
    return st;
}

SolveOutcome nr_solve(const AdmittanceMatrix& y, const BusTypeAssignment& a,
                      const SolveOptions& options,
                      const PowerFlowState* initial) {
    check_balanced(a);
    const int n = y.n;
    const UnknownIndex ix = index_unknowns(a);

    SolveOutcome out;
    PowerFlowState st;
    if (!options.flat_start && initial != nullptr) {
        st = *initial;
        // re-pin whatever the assignment fixes
        for (int k = 0; k < n; ++k)
            if (a.has_v(k)) st.v[k] = a.spec_v[k];
        st.theta[a.slack] = 0.0;
    } else {
        st = flat_start(a);
    }

    std::vector<double> p_calc, q_calc;
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;

    auto finish = [&](SolveStatus status, int iters, double mm,
                      std::string diag) {
        calc_injections(y, st.v, st.theta, p_calc, q_calc);
        for (int k = 0; k < n; ++k) {
            st.p[k] = a.has_p(k) ? a.spec_p[k] : p_calc[k];
            st.q[k] = a.has_q(k) ? a.spec_q[k] : q_calc[k];
        }
        out.status = status;
        out.state = std::move(st);
        out.iterations = iters;
        out.max_mismatch = mm;
        out.diagnostic = std::move(diag);
        return out;
    };

    int it = 0;
    while (true) {
        calc_injections(y, st.v, st.theta, p_calc, q_calc);
        Eigen::VectorXd r = stack_mismatch(ix, a, p_calc, q_calc);
        const double mm = r.size() ? r.cwiseAbs().maxCoeff() : 0.0;
        if (!std::isfinite(mm) || mm > options.divergence_ceiling)
            return finish(SolveStatus::diverged, it, mm,
                          "residual blew past the divergence ceiling");
        if (mm <= options.tolerance)
            return finish(SolveStatus::converged, it, mm, "");
        if (it >= options.max_iterations)
            return finish(SolveStatus::max_iterations, it, mm,
                          "iteration cap reached");

        Eigen::SparseMatrix<double> J = jacobian(y, a, st.v, st.theta);
        J.makeCompressed();
        lu.compute(J);
        if (lu.info() != Eigen::Success)
            return finish(SolveStatus::diverged, it, mm,
                          "singular Jacobian in LU factorization");
        Eigen::VectorXd d = lu.solve(r);
        if (lu.info() != Eigen::Success || !d.allFinite())
            return finish(SolveStatus::diverged, it, mm,
                          "linear solve failed");

        // J is d(mismatch)/dx, so the Newton step is x <- x - d
        for (int k = 0; k < n; ++k) {
            if (ix.theta_col[k] >= 0) st.theta[k] -= d[ix.theta_col[k]];
            if (ix.v_col[k] >= 0) st.v[k] -= d[ix.v_col[k]];
        }
        for (int k = 0; k < n; ++k) {
            if (!std::isfinite(st.v[k]) || !std::isfinite(st.theta[k]) ||
                st.v[k] <= 0.0)
                return finish(SolveStatus::diverged, it + 1, mm,
                              "iterate left the physical domain");
        }
        ++it;
    }
}

}  // namespace gridpf
