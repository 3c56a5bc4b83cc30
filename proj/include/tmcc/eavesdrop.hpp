#pragma once

#include <vector>

#include "tmcc/alphabet.hpp"
#include "tmcc/photon_stats.hpp"

namespace tmcc {

/// Statistics of the source Eve uses to re-emit an intercepted count.
enum class ResendSource {
    tmcc,     // she clones with a TMCC source set to lambda_n
    poisson,  // she clones with an ordinary coherent source of mean n
};

/// Intercept-resend attack configuration.
struct CloneAttack {
    ResendSource source = ResendSource::tmcc;
    /// Absolute tolerance on |mean(lambda_n) - n| for the lambda_n solver.
    double solver_tolerance = 1e-9;
};

/// How the analytic letter-error probability is aggregated.
enum class Estimator {
    /// The boundary-region double sums exactly as the source analysis
    /// prints them: only the first and last letters carry a resend
    /// fluctuation factor, interior letters count as always correct, and
    /// the total is averaged uniformly over the m letters.
    paper_literal,
    /// Self-consistent model value: P_err = 1 - sum_n P_n(lambda) *
    /// P(letter(k) = letter(n)) with k drawn from the resend distribution
    /// for n. This is the quantity the Monte Carlo protocol converges to.
    probability_weighted,
};

/// Per-letter and per-bit error rates Eve introduces on intercepted slots.
///
/// `per_letter_correct[x]` is the model-exact conditional probability that
/// Bob decodes letter x given Alice obtained x (1.0 for letters of zero
/// probability). `p_err` depends on the estimator; `p_err_per_bit` is
/// always p_err / log2(m). `p_err_per_bit_hamming` is the expected fraction
/// of wrong bits under the natural binary codes, computed from the full
/// joint model regardless of estimator (the literal formula has no bitwise
/// decomposition).
struct QberReport {
    std::vector<double> per_letter_correct;
    double p_err = 0.0;
    double p_err_per_bit = 0.0;
    double p_err_per_bit_hamming = 0.0;
    Estimator estimator = Estimator::probability_weighted;
};

/// Poisson PMF e^-mean mean^k / k!, evaluated in log space.
double poisson_pmf(double mean, int k);

/// The source parameter lambda_n Eve dials in after counting n photons,
/// defined by mean matching: mean(lambda_n) = n within tol. Bisection on
/// the strictly increasing mean; lambda_0 = 0 exactly.
double lambda_for_target(int n, double tol = 1e-9);

/// Distribution of the re-emitted count k after Eve measures n.
PhotonDistribution resend_pmf(int n, ResendSource source, double tol = 1e-9);

/// Unconditional distribution of Bob's count under interception: the
/// P_n(lambda)-weighted mixture of the per-n resend distributions,
/// truncated and renormalized.
PhotonDistribution mixture_pmf(const TmccState& state, ResendSource source,
                               double tol = 1e-9);

/// Analytic QBER of the clone attack for an m-ary alphabet centered at the
/// rounded mean of `state`.
QberReport analytic_qber(const TmccState& state, int m, const CloneAttack& attack,
                         Estimator estimator);

}  // namespace tmcc
