#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "gridpf/network.hpp"

namespace gridpf {

// Per-bus electrical state, p.u. and radians. At a converged state p and q
// equal the calculated injections at (v, theta) within the solve tolerance.
struct PowerFlowState {
    std::vector<double> v, theta, p, q;
};

enum class SolveStatus { converged, diverged, max_iterations };

const char* to_string(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::diverged;
    PowerFlowState state;
    int iterations = 0;
    double max_mismatch = 0.0;
    std::string diagnostic;
};

struct SolveOptions {
    double tolerance = 1e-8;   // p.u., infinity norm of the residual
    int max_iterations = 30;
    bool flat_start = true;
    double divergence_ceiling = 1e6;  // p.u.
};

// Ordering of the unknown vector x and of the residual rows. Unknowns:
// theta at every non-Vtheta bus, then V at {PQ, P} buses, each block in bus
// index order. Rows: dP at {PQ, PV, P, PQV}, then dQ at {PQ, PQV}.
struct UnknownIndex {
    std::vector<int> theta_col, v_col;  // per-bus column or -1
    std::vector<int> p_row, q_row;      // per-bus row or -1
    int n_theta = 0, n_v = 0, n_p = 0, n_q = 0;
    int dim() const { return n_theta + n_v; }
};
UnknownIndex index_unknowns(const BusTypeAssignment& a);

// p_calc_k = sum_j V_k V_j (G_kj cos th_kj + B_kj sin th_kj)
// q_calc_k = sum_j V_k V_j (G_kj sin th_kj - B_kj cos th_kj),  th_kj = th_k - th_j
void calc_injections(const AdmittanceMatrix& y, const std::vector<double>& v,
                     const std::vector<double>& theta,
                     std::vector<double>& p_calc, std::vector<double>& q_calc);

// Residual: spec minus calculated, stacked per UnknownIndex row order.
// Length (n-1) + |PQ| + |PQV|. Throws CaseError on an unbalanced assignment.
Eigen::VectorXd mismatch(const AdmittanceMatrix& y,
                         const BusTypeAssignment& a,
                         const std::vector<double>& v,
                         const std::vector<double>& theta);

// Analytic Jacobian of the mismatch vector with respect to x (so the entries
// are the negated injection derivatives). Square, dim() x dim().
Eigen::SparseMatrix<double> jacobian(const AdmittanceMatrix& y,
                                     const BusTypeAssignment& a,
                                     const std::vector<double>& v,
                                     const std::vector<double>& theta);

// theta = 0 everywhere; V = spec_v where the type fixes it, else 1.0.
PowerFlowState flat_start(const BusTypeAssignment& a);

// Full Newton-Raphson. On return the state is completed: Q filled in at
// {PV, Vtheta, P} buses, P at the Vtheta bus, specified values elsewhere.
// `initial` is used when options.flat_start is false.
SolveOutcome nr_solve(const AdmittanceMatrix& y, const BusTypeAssignment& a,
                      const SolveOptions& options,
                      const PowerFlowState* initial = nullptr);

}  // namespace gridpf
