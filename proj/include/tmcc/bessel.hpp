#pragma once

namespace tmcc {

/// Modified Bessel function of the first kind, order zero.
///
/// Power series I0(x) = sum_k (x/2)^(2k) / k!^2, summed until the next term
/// no longer changes the accumulator. Accurate to better than 1e-12 relative
/// for the guarded range.
///
/// Throws validation_error for x < 0 or x > 200. The upper guard keeps every
/// intermediate term comfortably inside double range; source intensities in
/// this library never come near it.
double bessel_i0(double x);

}  // namespace tmcc
