#pragma once

#include <cstddef>

namespace cvse::kernels {

// The pairwise comparison kernel psi(a,b) = 1, 1/2, 0 for a>b, a=b, a<b is
// the inner loop of every AUC evaluation here. Scalar reference versions are
// the contract; the AVX2 versions must match them bitwise (psi values are
// multiples of 1/2, so sums are exact regardless of accumulation order).

enum class Impl { Scalar, Avx2 };

bool avx2_supported();
Impl active();
// Test hook; throws InvalidInput when the implementation is unavailable.
void force(Impl impl);

// sum over all (i,j) of psi(a[i], b[j])
double psi_pair_sum(const double* a, std::size_t na, const double* b, std::size_t nb);
// out[j] = psi(a, b[j])
void psi_fill(double a, const double* b, std::size_t nb, double* out);

double psi_pair_sum_scalar(const double* a, std::size_t na, const double* b, std::size_t nb);
void psi_fill_scalar(double a, const double* b, std::size_t nb, double* out);

#if defined(__x86_64__) || defined(_M_X64)
double psi_pair_sum_avx2(const double* a, std::size_t na, const double* b, std::size_t nb);
void psi_fill_avx2(double a, const double* b, std::size_t nb, double* out);
#endif

} // namespace cvse::kernels
