#include "gridpf/kernels.hpp"

namespace gridpf::kernels {

void injections_scalar(int n, const int* row_ptr, const int* col_idx,
                       const double* g, const double* b, const double* e,
                       const double* f, double* p_out, double* q_out) {
    for (int k = 0; k < n; ++k) {
        double ire = 0.0, iim = 0.0;
        for (int idx = row_ptr[k]; idx < row_ptr[k + 1]; ++idx) {
            const int j = col_idx[idx];
            ire += g[idx] * e[j] - b[idx] * f[j];
            iim += g[idx] * f[j] + b[idx] * e[j];
        }
        p_out[k] = e[k] * ire + f[k] * iim;
        q_out[k] = f[k] * ire - e[k] * iim;
    }
}

namespace {

InjectionFn resolve() {
#if (defined(__x86_64__) || defined(_M_X64)) && defined(__GNUC__)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return injections_avx2;
#endif
    return injections_scalar;
}

struct Selection {
    InjectionFn fn;
    const char* name;
};

const Selection& selection() {
    static const Selection s = [] {
        InjectionFn fn = resolve();
        return Selection{fn, fn == injections_scalar ? "scalar" : "avx2"};
    }();
    return s;
}

}  // namespace

InjectionFn select_injection_kernel() { return selection().fn; }

const char* active_kernel_name() { return selection().name; }

}  // namespace gridpf::kernels
