#include "fastmath.hpp"

#include <cmath>

// Branchless forms built on exp(-|x|) so the loops auto-vectorize. exp of a
// non-positive argument cannot overflow, which keeps the whole range of
// finite inputs safe.

namespace oplearn::fastmath {

void vtanh(double* x, long n) {
    for (long i = 0; i < n; ++i) {
        const double v = x[i];
        const double t = std::exp(-2.0 * std::fabs(v));
        const double y = (1.0 - t) / (1.0 + t);
        x[i] = std::copysign(y, v);
    }
}

void vsigmoid(double* x, long n) {
    for (long i = 0; i < n; ++i) {
        const double v = x[i];
        const double e = std::exp(-std::fabs(v));
        const double pos = 1.0 / (1.0 + e);
        const double neg = e / (1.0 + e);
        x[i] = v >= 0.0 ? pos : neg;
    }
}

} // namespace oplearn::fastmath
