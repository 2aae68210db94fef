#include "cvse/kernels.hpp"

#include "cvse/errors.hpp"

namespace cvse::kernels {

namespace {

Impl pick_default() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Impl::Avx2;
#endif
    return Impl::Scalar;
}

Impl g_impl = pick_default();

} // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Impl active() { return g_impl; }

void force(Impl impl) {
    if (impl == Impl::Avx2 && !avx2_supported())
        throw InvalidInput("kernels: AVX2 not supported on this CPU");
    g_impl = impl;
}

double psi_pair_sum(const double* a, std::size_t na, const double* b, std::size_t nb) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_impl == Impl::Avx2) return psi_pair_sum_avx2(a, na, b, nb);
#endif
    return psi_pair_sum_scalar(a, na, b, nb);
}

void psi_fill(double a, const double* b, std::size_t nb, double* out) {
#if defined(__x86_64__) || defined(_M_X64)
    if (g_impl == Impl::Avx2) {
        psi_fill_avx2(a, b, nb, out);
        return;
    }
#endif
    psi_fill_scalar(a, b, nb, out);
}

} // namespace cvse::kernels
