#include "cvse/kernels.hpp"

namespace cvse::kernels {

double psi_pair_sum_scalar(const double* a, std::size_t na, const double* b, std::size_t nb) {
    double sum = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        const double ai = a[i];
        for (std::size_t j = 0; j < nb; ++j) {
            if (ai > b[j])
                sum += 1.0;
            else if (ai == b[j])
                sum += 0.5;
        }
    }
    return sum;
}

void psi_fill_scalar(double a, const double* b, std::size_t nb, double* out) {
    for (std::size_t j = 0; j < nb; ++j) {
        out[j] = a > b[j] ? 1.0 : (a == b[j] ? 0.5 : 0.0);
    }
}

} // namespace cvse::kernels
