// Independent numeric oracles for the test suites. Everything here is
// deliberately written along different arithmetic routes than the library
// (term recurrences and quadrature in long double instead of log-gamma
// evaluation), so agreement is evidence and not tautology.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace oracle {

// Power series I0(x) = sum_k (x/2)^(2k) / k!^2, summed until the next term
// drops below 1e-18 of the running sum.
inline long double series_i0(long double x) {
    const long double q = 0.25L * x * x;
    long double term = 1.0L;
    long double sum = 1.0L;
    for (int k = 1; k < 2000; ++k) {
        term *= q / (static_cast<long double>(k) * static_cast<long double>(k));
        sum += term;
        if (term < 1e-18L * sum) {
            break;
        }
    }
    return sum;
}

// Trapezoid rule on I0(x) = (1/pi) Int_0^pi exp(x cos t) dt. All odd
// derivatives of the integrand vanish at both endpoints, so the rule
// converges spectrally; N = 4096 leaves error far below long double eps.
inline long double quadrature_i0(long double x) {
    constexpr int kIntervals = 4096;
    const long double pi = 3.14159265358979323846264338327950288L;
    const long double h = pi / kIntervals;
    long double sum = 0.5L * (std::exp(x) + std::exp(-x));
    for (int k = 1; k < kIntervals; ++k) {
        sum += std::exp(x * std::cos(h * static_cast<long double>(k)));
    }
    return sum * h / pi;
}

// Unnormalized TMCC terms t_n = lambda^(2n) / n!^2 via the recurrence
// t_n = t_{n-1} * lambda^2 / n^2.
inline std::vector<long double> tmcc_terms(long double lambda, int n_max) {
    std::vector<long double> t(static_cast<std::size_t>(n_max) + 1, 0.0L);
    t[0] = 1.0L;
    const long double q = lambda * lambda;
    for (int n = 1; n <= n_max; ++n) {
        t[static_cast<std::size_t>(n)] =
            t[static_cast<std::size_t>(n - 1)] * q /
            (static_cast<long double>(n) * static_cast<long double>(n));
    }
    return t;
}

// P_n(lambda) over 0..n_max, normalized by the full series I0 (not by the
// truncated sum), matching the closed form of the photon-number law.
inline std::vector<double> tmcc_pmf(double lambda, int n_max) {
    std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (lambda == 0.0) {
        p[0] = 1.0;
        return p;
    }
    const auto terms = tmcc_terms(lambda, n_max);
    const long double norm = series_i0(2.0L * lambda);
    for (int n = 0; n <= n_max; ++n) {
        p[static_cast<std::size_t>(n)] =
            static_cast<double>(terms[static_cast<std::size_t>(n)] / norm);
    }
    return p;
}

// Enough support that the neglected tail is far below long double noise for
// the lambdas the tests use (lambda <= ~70).
inline int wide_support(double lambda) {
    return 60 + static_cast<int>(3.0 * lambda);
}

inline double tmcc_mean(double lambda) {
    if (lambda == 0.0) {
        return 0.0;
    }
    const int n_max = wide_support(lambda);
    const auto terms = tmcc_terms(lambda, n_max);
    long double num = 0.0L;
    long double den = 0.0L;
    for (int n = 0; n <= n_max; ++n) {
        num += static_cast<long double>(n) * terms[static_cast<std::size_t>(n)];
        den += terms[static_cast<std::size_t>(n)];
    }
    return static_cast<double>(num / den);
}

inline double tmcc_second_moment(double lambda) {
    if (lambda == 0.0) {
        return 0.0;
    }
    const int n_max = wide_support(lambda);
    const auto terms = tmcc_terms(lambda, n_max);
    long double num = 0.0L;
    long double den = 0.0L;
    for (int n = 0; n <= n_max; ++n) {
        num += static_cast<long double>(n) * static_cast<long double>(n) *
               terms[static_cast<std::size_t>(n)];
        den += terms[static_cast<std::size_t>(n)];
    }
    return static_cast<double>(num / den);
}

inline double tmcc_mandel_q(double lambda) {
    const double mean = tmcc_mean(lambda);
    const double variance = tmcc_second_moment(lambda) - mean * mean;
    return (variance - mean) / mean;
}

// Bisection for the lambda whose mean photon number equals target, against
// the oracle mean only.
inline double lambda_matching_mean(double target, double tol = 1e-10) {
    if (target == 0.0) {
        return 0.0;
    }
    double lo = 0.0;
    double hi = 1.0;
    while (tmcc_mean(hi) < target) {
        hi *= 2.0;
        if (hi > 128.0) {
            throw std::runtime_error("oracle bisection bracket failed");
        }
    }
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double residual = tmcc_mean(mid) - target;
        if (std::abs(residual) <= tol) {
            return mid;
        }
        (residual < 0.0 ? lo : hi) = mid;
    }
    throw std::runtime_error("oracle bisection did not converge");
}

// Direct Poisson PMF via the term recurrence t_k = t_{k-1} * mean / k.
inline std::vector<double> poisson_pmf(double mean, int k_max) {
    std::vector<double> p(static_cast<std::size_t>(k_max) + 1, 0.0);
    if (mean == 0.0) {
        p[0] = 1.0;
        return p;
    }
    long double t = std::exp(static_cast<long double>(-mean));
    p[0] = static_cast<double>(t);
    for (int k = 1; k <= k_max; ++k) {
        t *= static_cast<long double>(mean) / static_cast<long double>(k);
        p[static_cast<std::size_t>(k)] = static_cast<double>(t);
    }
    return p;
}

inline double entropy_bits(const std::vector<double>& probs) {
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

}  // namespace oracle
