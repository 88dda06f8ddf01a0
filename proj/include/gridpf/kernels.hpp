#pragma once

namespace gridpf::kernels {

// Nodal complex-current accumulation over a CSR admittance structure, in
// rectangular voltage coordinates e_j = V_j cos(th_j), f_j = V_j sin(th_j):
//   ire_k = sum_j (g_kj * e_j - b_kj * f_j)
//   iim_k = sum_j (g_kj * f_j + b_kj * e_j)
//   p_k   = e_k * ire_k + f_k * iim_k
//   q_k   = f_k * ire_k - e_k * iim_k
// Equivalent to the polar power-balance sums; pure multiply-add, no trig in
// the inner loop.
using InjectionFn = void (*)(int n, const int* row_ptr, const int* col_idx,
                             const double* g, const double* b, const double* e,
                             const double* f, double* p_out, double* q_out);

void injections_scalar(int n, const int* row_ptr, const int* col_idx,
                       const double* g, const double* b, const double* e,
                       const double* f, double* p_out, double* q_out);

#if defined(__x86_64__) || defined(_M_X64)
void injections_avx2(int n, const int* row_ptr, const int* col_idx,
                     const double* g, const double* b, const double* e,
                     const double* f, double* p_out, double* q_out);
#endif

// Picks the widest variant the running CPU supports. Resolved once.
InjectionFn select_injection_kernel();
const char* active_kernel_name();

}  // namespace gridpf::kernels
