#include "tmcc/photon_stats.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "tmcc/bessel.hpp"
#include "tmcc/errors.hpp"

namespace tmcc {

namespace {

void check_lambda(double lambda) {
    if (!(lambda >= 0.0)) {
        throw validation_error("lambda must be nonnegative and finite");
    }
    if (lambda > TmccState::kMaxLambda) {
        std::ostringstream msg;
        msg << "lambda = " << lambda << " exceeds the supported maximum "
            << TmccState::kMaxLambda;
        throw validation_error(msg.str());
    }
}

// Upper bound on sum_{n > n_max} lambda^(2n)/n!^2 via the geometric
// majorant of the term ratio r_n = lambda^2/(n+1)^2: once r < 1 the tail
// is at most t_{n_max} * r / (1 - r). Returns +inf while r >= 1.
double unnormalized_tail_bound(double lambda, int n_max) {
    if (lambda == 0.0) {
        return 0.0;
    }
    const double q = lambda * lambda;
    const double ratio = q / (static_cast<double>(n_max + 1) * static_cast<double>(n_max + 1));
    if (ratio >= 1.0) {
        return std::numeric_limits<double>::infinity();
    }
    // log of the term at n_max, then the geometric sum factor.
    const double log_term =
        2.0 * static_cast<double>(n_max) * std::log(lambda) - 2.0 * std::lgamma(n_max + 1.0);
    return std::exp(log_term) * ratio / (1.0 - ratio);
}

int auto_n_max(double lambda) {
    if (lambda == 0.0) {
        return TmccState::kMinNmax;
    }
    const double total = bessel_i0(2.0 * lambda);
    for (int n = TmccState::kMinNmax; n < 10000; ++n) {
        const double bound = unnormalized_tail_bound(lambda, n);
        if (bound / total < TmccState::kTailTolerance) {
            return n;
        }
    }
    throw numeric_error("auto-truncation failed to converge");  // unreachable for lambda <= 100
}

}  // namespace

TmccState::TmccState(double lambda_, int n_max_) : lambda(lambda_), n_max(n_max_) {
    check_lambda(lambda);
    if (n_max < 1) {
        throw validation_error("n_max must be at least 1");
    }
}

TmccState::TmccState(double lambda_) : lambda(lambda_) {
    check_lambda(lambda);
    n_max = auto_n_max(lambda);
}

double photon_number_pmf(double lambda, int n) {
    check_lambda(lambda);
    if (n < 0) {
        throw validation_error("photon number must be nonnegative");
    }
    if (lambda == 0.0) {
        return n == 0 ? 1.0 : 0.0;
    }
    const double log_p = 2.0 * static_cast<double>(n) * std::log(lambda) -
                         2.0 * std::lgamma(n + 1.0) - std::log(bessel_i0(2.0 * lambda));
    return std::exp(log_p);
}

PhotonDistribution build_distribution(const TmccState& state) {
    PhotonDistribution dist;
    dist.n_max = state.n_max;
    dist.probs.assign(static_cast<std::size_t>(state.n_max) + 1, 0.0);

    if (state.lambda == 0.0) {
        dist.probs[0] = 1.0;
        dist.tail_mass = 0.0;
        return dist;
    }

    const double log_norm = std::log(bessel_i0(2.0 * state.lambda));
    const double log_lambda = std::log(state.lambda);
    double sum = 0.0;
    for (int n = 0; n <= state.n_max; ++n) {
        const double p =
            std::exp(2.0 * n * log_lambda - 2.0 * std::lgamma(n + 1.0) - log_norm);
        dist.probs[static_cast<std::size_t>(n)] = p;
        sum += p;
    }

    dist.tail_mass =
        unnormalized_tail_bound(state.lambda, state.n_max) / bessel_i0(2.0 * state.lambda);
    if (!(dist.tail_mass < TmccState::kTailTolerance)) {
        std::ostringstream msg;
        msg << "truncation at n_max = " << state.n_max << " leaves tail mass "
            << dist.tail_mass << " > " << TmccState::kTailTolerance
            << "; use n_max >= " << auto_n_max(state.lambda)
            << " (or the auto-truncating constructor)";
        throw numeric_error(msg.str());
    }

    for (double& p : dist.probs) {
        p /= sum;
    }
    return dist;
}

double PhotonDistribution::mean() const {
    double m = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        m += static_cast<double>(n) * probs[static_cast<std::size_t>(n)];
    }
    return m;
}

double PhotonDistribution::second_moment() const {
    double m2 = 0.0;
    for (int n = 0; n <= n_max; ++n) {
        m2 += static_cast<double>(n) * static_cast<double>(n) *
              probs[static_cast<std::size_t>(n)];
    }
    return m2;
}

std::vector<double> PhotonDistribution::cdf() const {
    std::vector<double> c(probs.size());
    std::partial_sum(probs.begin(), probs.end(), c.begin());
    c.back() = 1.0;
    return c;
}

double mean_photon_number(const TmccState& state) {
    return build_distribution(state).mean();
}

double second_moment(const TmccState& state) {
    return build_distribution(state).second_moment();
}

double mandel_q(const TmccState& state) {
    const PhotonDistribution dist = build_distribution(state);
    const double mean = dist.mean();
    if (mean <= 0.0) {
        throw validation_error("mandel_q is undefined for zero mean photon number");
    }
    const double variance = dist.second_moment() - mean * mean;
    return (variance - mean) / mean;
}

double shannon_entropy(std::span<const double> probs) {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) {
            throw validation_error("shannon_entropy: probabilities must be nonnegative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        std::ostringstream msg;
        msg << "shannon_entropy: probabilities sum to " << sum << ", not 1";
        throw validation_error(msg.str());
    }
    double h = 0.0;
    for (double p : probs) {
        if (p > 0.0) {
            h -= p * std::log2(p);
        }
    }
    return h;
}

double max_info(const TmccState& state) {
    const PhotonDistribution dist = build_distribution(state);
    return shannon_entropy(dist.probs);
}

}  // namespace tmcc
