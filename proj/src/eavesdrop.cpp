#include "tmcc/eavesdrop.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "tmcc/errors.hpp"

namespace tmcc {

namespace {

void check_tol(double tol) {
    if (!(tol > 0.0) || tol > 1e-3) {
        throw validation_error("solver tolerance must lie in (0, 1e-3]");
    }
}

// Truncation bound for a Poisson PMF, mirroring the TMCC policy: smallest
// k_max >= 25 whose geometric tail majorant is below the tail tolerance.
int poisson_k_max(double mean) {
    if (mean == 0.0) {
        return TmccState::kMinNmax;
    }
    for (int k = TmccState::kMinNmax; k < 100000; ++k) {
        const double ratio = mean / static_cast<double>(k + 1);
        if (ratio >= 1.0) {
            continue;
        }
        const double log_term = static_cast<double>(k) * std::log(mean) -
                                std::lgamma(k + 1.0) - mean;
        if (std::exp(log_term) * ratio / (1.0 - ratio) < TmccState::kTailTolerance) {
            return k;
        }
    }
    throw numeric_error("poisson truncation failed to converge");
}

PhotonDistribution truncated_poisson(double mean) {
    PhotonDistribution dist;
    dist.n_max = poisson_k_max(mean);
    dist.probs.assign(static_cast<std::size_t>(dist.n_max) + 1, 0.0);
    if (mean == 0.0) {
        dist.probs[0] = 1.0;
        return dist;
    }
    double sum = 0.0;
    for (int k = 0; k <= dist.n_max; ++k) {
        const double p = poisson_pmf(mean, k);
        dist.probs[static_cast<std::size_t>(k)] = p;
        sum += p;
    }
    dist.tail_mass = 1.0 - sum;
    if (dist.tail_mass < 0.0) {
        dist.tail_mass = 0.0;
    }
    for (double& p : dist.probs) {
        p /= sum;
    }
    return dist;
}

int hamming_distance(const Letter& a, const Letter& b) {
    return std::popcount(a.bits() ^ b.bits());
}

}  // namespace

double poisson_pmf(double mean, int k) {
    if (!(mean >= 0.0)) {
        throw validation_error("poisson mean must be nonnegative");
    }
    if (k < 0) {
        throw validation_error("poisson count must be nonnegative");
    }
    if (mean == 0.0) {
        return k == 0 ? 1.0 : 0.0;
    }
    return std::exp(static_cast<double>(k) * std::log(mean) - std::lgamma(k + 1.0) - mean);
}

double lambda_for_target(int n, double tol) {
    if (n < 0) {
        throw validation_error("target photon number must be nonnegative");
    }
    check_tol(tol);
    if (n == 0) {
        return 0.0;
    }

    const double target = static_cast<double>(n);
    auto mean_at = [](double lambda) { return mean_photon_number(TmccState(lambda)); };

    // Expand the bracket geometrically; the mean grows roughly like lambda,
    // so this terminates almost immediately.
    double lo = 0.0;
    double hi = 1.0;
    while (mean_at(hi) < target) {
        hi *= 2.0;
        if (hi > TmccState::kMaxLambda) {
            throw numeric_error("lambda_for_target: target mean out of supported range");
        }
    }

    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double residual = mean_at(mid) - target;
        if (std::abs(residual) <= tol) {
            return mid;
        }
        if (residual < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    throw numeric_error("lambda_for_target: bisection did not converge");
}

PhotonDistribution resend_pmf(int n, ResendSource source, double tol) {
    if (n < 0) {
        throw validation_error("measured photon number must be nonnegative");
    }
    if (source == ResendSource::poisson) {
        return truncated_poisson(static_cast<double>(n));
    }
    return build_distribution(TmccState(lambda_for_target(n, tol)));
}

PhotonDistribution mixture_pmf(const TmccState& state, ResendSource source, double tol) {
    const PhotonDistribution incoming = build_distribution(state);

    int k_max = 0;
    std::vector<PhotonDistribution> resend(static_cast<std::size_t>(incoming.n_max) + 1);
    for (int n = 0; n <= incoming.n_max; ++n) {
        resend[static_cast<std::size_t>(n)] = resend_pmf(n, source, tol);
        k_max = std::max(k_max, resend[static_cast<std::size_t>(n)].n_max);
    }

    PhotonDistribution mix;
    mix.n_max = k_max;
    mix.probs.assign(static_cast<std::size_t>(k_max) + 1, 0.0);
    mix.tail_mass = incoming.tail_mass;
    for (int n = 0; n <= incoming.n_max; ++n) {
        const double w = incoming.prob(n);
        const PhotonDistribution& r = resend[static_cast<std::size_t>(n)];
        for (int k = 0; k <= r.n_max; ++k) {
            mix.probs[static_cast<std::size_t>(k)] += w * r.prob(k);
        }
    }

    double sum = 0.0;
    for (double p : mix.probs) {
        sum += p;
    }
    for (double& p : mix.probs) {
        p /= sum;
    }
    return mix;
}

QberReport analytic_qber(const TmccState& state, int m, const CloneAttack& attack,
                         Estimator estimator) {
    check_tol(attack.solver_tolerance);
    const PhotonDistribution incoming = build_distribution(state);
    const AlphabetSpec spec(m, center_from_mean(incoming.mean()));
    const int bits = spec.bits_per_letter();

    // Per-n resend distributions and the joint letter statistics.
    std::vector<double> joint_correct(static_cast<std::size_t>(m), 0.0);
    std::vector<double> letter_prob(static_cast<std::size_t>(m), 0.0);
    double correct_total = 0.0;
    double expected_wrong_bits = 0.0;
    std::vector<PhotonDistribution> resend(static_cast<std::size_t>(incoming.n_max) + 1);

    for (int n = 0; n <= incoming.n_max; ++n) {
        resend[static_cast<std::size_t>(n)] =
            resend_pmf(n, attack.source, attack.solver_tolerance);
        const PhotonDistribution& r = resend[static_cast<std::size_t>(n)];
        const Letter alice = encode_letter(n, spec);
        const double w = incoming.prob(n);
        letter_prob[static_cast<std::size_t>(alice.index)] += w;

        double p_same = 0.0;
        double wrong_bits = 0.0;
        for (int k = 0; k <= r.n_max; ++k) {
            const Letter bob = encode_letter(k, spec);
            if (bob == alice) {
                p_same += r.prob(k);
            } else {
                wrong_bits += r.prob(k) * hamming_distance(alice, bob);
            }
        }
        joint_correct[static_cast<std::size_t>(alice.index)] += w * p_same;
        correct_total += w * p_same;
        expected_wrong_bits += w * wrong_bits;
    }

    QberReport report;
    report.estimator = estimator;
    report.per_letter_correct.assign(static_cast<std::size_t>(m), 1.0);
    for (int x = 0; x < m; ++x) {
        if (letter_prob[static_cast<std::size_t>(x)] > 0.0) {
            report.per_letter_correct[static_cast<std::size_t>(x)] =
                joint_correct[static_cast<std::size_t>(x)] /
                letter_prob[static_cast<std::size_t>(x)];
        }
    }
    report.p_err_per_bit_hamming = expected_wrong_bits / static_cast<double>(bits);

    if (estimator == Estimator::probability_weighted) {
        report.p_err = 1.0 - correct_total;
    } else {
        // Boundary-region double sums: the first and last letters keep the
        // resend fluctuation factor, every interior letter contributes its
        // full source probability, and the total is averaged uniformly
        // over the m letters.
        const int c = spec.center;
        int first_hi = 0;  // upper edge of the first letter region
        int last_lo = 0;   // lower edge of the last letter region
        if (m == 2) {
            first_hi = c;
            last_lo = c + 1;
        } else if (m == 4) {
            first_hi = c - 1;
            last_lo = c + 2;
        } else {
            first_hi = c - 3;
            last_lo = c + 4;
        }

        double s = 0.0;
        for (int n = 0; n <= incoming.n_max; ++n) {
            const PhotonDistribution& r = resend[static_cast<std::size_t>(n)];
            if (n <= first_hi) {
                double inner = 0.0;
                for (int k = 0; k <= std::min(first_hi, r.n_max); ++k) {
                    inner += r.prob(k);
                }
                s += incoming.prob(n) * inner;
            } else if (n >= last_lo) {
                double inner = 0.0;
                for (int k = last_lo; k <= r.n_max; ++k) {
                    inner += r.prob(k);
                }
                s += incoming.prob(n) * inner;
            } else {
                s += incoming.prob(n);
            }
        }
        report.p_err = 1.0 - s / static_cast<double>(m);
    }

    report.p_err_per_bit = report.p_err / static_cast<double>(bits);
    return report;
}

}  // namespace tmcc
