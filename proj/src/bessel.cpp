#include "tmcc/bessel.hpp"

#include "tmcc/errors.hpp"

namespace tmcc {

double bessel_i0(double x) {
    if (!(x >= 0.0) || x > 200.0) {
        throw validation_error("bessel_i0: x must lie in [0, 200]");
    }
    // Term recurrence t_{k+1} = t_k * (x/2)^2 / (k+1)^2. Terms grow until
    // k ~ x/2 and then decay faster than geometrically; at x = 200 the peak
    // term is ~1e85, well inside double range.
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * static_cast<double>(k));
        const double next = sum + term;
        if (next == sum) {
            break;
        }
        sum = next;
    }
    return sum;
}

}  // namespace tmcc
