#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tmcc {

/// Source parameterization of a two-mode coherently correlated beam: the
/// modulus of the state parameter plus the Fock-sum truncation bound.
///
/// Photon-number statistics of either mode follow
///   P_n = lambda^(2n) / (n!^2 I0(2 lambda)).
struct TmccState {
    double lambda = 0.0;
    int n_max = kMinNmax;

    /// Truncation floor; auto-truncation never cuts below this.
    static constexpr int kMinNmax = 25;
    /// Largest lambda accepted (keeps 2*lambda inside the bessel_i0 guard).
    static constexpr double kMaxLambda = 100.0;
    /// Normalized tail mass a distribution may leave beyond n_max.
    static constexpr double kTailTolerance = 1e-12;

    /// Validates lambda in [0, kMaxLambda] and n_max >= 1; throws
    /// validation_error otherwise.
    TmccState(double lambda, int n_max);

    /// Picks n_max automatically: the smallest bound, at least kMinNmax,
    /// whose geometric tail majorant falls below kTailTolerance.
    explicit TmccState(double lambda);
};

/// Truncated, renormalized photon-number PMF. `tail_mass` is the (bounded)
/// probability mass beyond n_max before renormalization.
struct PhotonDistribution {
    std::vector<double> probs;  // index = photon number, 0..n_max
    int n_max = 0;
    double tail_mass = 0.0;

    double prob(int n) const {
        return (n >= 0 && n <= n_max) ? probs[static_cast<std::size_t>(n)] : 0.0;
    }
    double mean() const;
    double second_moment() const;
    /// Cumulative P(N <= n), clamped so the final entry is exactly 1.
    std::vector<double> cdf() const;
};

/// Single-point P_n(lambda), evaluated in log space so large n cannot
/// overflow the factorial. Exact 1 / 0 answers at lambda = 0.
double photon_number_pmf(double lambda, int n);

/// Full PMF over 0..state.n_max. Throws numeric_error when the tail beyond
/// state.n_max exceeds the tolerance (the message names a sufficient bound).
PhotonDistribution build_distribution(const TmccState& state);

/// <n> over the truncated support.
double mean_photon_number(const TmccState& state);

/// <n^2> over the truncated support.
double second_moment(const TmccState& state);

/// Mandel parameter Q = (Var(n) - <n>) / <n>. Negative values flag
/// sub-Poisson statistics. Throws validation_error when the mean is zero.
double mandel_q(const TmccState& state);

/// Shannon entropy in bits, -sum p log2 p with 0 log 0 = 0. The input must
/// be nonnegative and sum to 1 within 1e-9.
double shannon_entropy(std::span<const double> probs);

/// Entropy of the full photon-number PMF: the channel capacity when every
/// distinct count is its own letter.
double max_info(const TmccState& state);

}  // namespace tmcc
