#include "tmcc/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <thread>

#include "tmcc/errors.hpp"
#include "tmcc/philox.hpp"

namespace tmcc {

namespace {

void check_config(const SessionConfig& config) {
    if (config.alphabet_size != 2 && config.alphabet_size != 4 &&
        config.alphabet_size != 8) {
        throw validation_error("alphabet size must be 2, 4 or 8");
    }
    if (config.slots < 1) {
        throw validation_error("slots must be at least 1");
    }
}

// Everything a worker needs to process slots independently.
struct SessionPlan {
    std::vector<double> alice_cdf;
    std::vector<std::vector<double>> resend_cdf;  // empty when no attack
    AlphabetSpec spec;
    int bits;
};

SessionPlan make_plan(const SessionConfig& config) {
    const TmccState state(config.lambda);
    const PhotonDistribution dist = build_distribution(state);
    SessionPlan plan{dist.cdf(),
                     {},
                     AlphabetSpec(config.alphabet_size, center_from_mean(dist.mean())),
                     0};
    plan.bits = plan.spec.bits_per_letter();
    if (config.attack) {
        plan.resend_cdf.resize(static_cast<std::size_t>(dist.n_max) + 1);
        for (int n = 0; n <= dist.n_max; ++n) {
            plan.resend_cdf[static_cast<std::size_t>(n)] =
                resend_pmf(n, config.attack->source, config.attack->solver_tolerance)
                    .cdf();
        }
    }
    return plan;
}

int sample_from_cdf(const std::vector<double>& cdf, double draw) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), draw);
    return static_cast<int>(std::min(it - cdf.begin(),
                                     static_cast<std::ptrdiff_t>(cdf.size()) - 1));
}

// Integer tallies only, so shard merging is exact in any order.
struct Tally {
    std::uint64_t letter_errors = 0;
    std::uint64_t wrong_bits = 0;
    std::uint64_t sum_n = 0;
    std::uint64_t sum_n2 = 0;
    std::vector<std::uint64_t> letter_counts;

    explicit Tally(int m) : letter_counts(static_cast<std::size_t>(m), 0) {}

    void merge(const Tally& other) {
        letter_errors += other.letter_errors;
        wrong_bits += other.wrong_bits;
        sum_n += other.sum_n;
        sum_n2 += other.sum_n2;
        for (std::size_t i = 0; i < letter_counts.size(); ++i) {
            letter_counts[i] += other.letter_counts[i];
        }
    }
};

struct SlotOutcome {
    int n_alice;
    int n_bob;
    Letter letter_alice;
    Letter letter_bob;
};

SlotOutcome process_slot(const SessionConfig& config, const SessionPlan& plan,
                         std::uint64_t slot) {
    const SlotDraws draws = slot_draws(config.seed, slot);
    const int n_alice = sample_from_cdf(plan.alice_cdf, draws.first);
    const int n_bob =
        config.attack
            ? sample_from_cdf(plan.resend_cdf[static_cast<std::size_t>(n_alice)],
                              draws.second)
            : n_alice;
    return SlotOutcome{n_alice, n_bob, encode_letter(n_alice, plan.spec),
                       encode_letter(n_bob, plan.spec)};
}

void tally_slot(Tally& tally, const SlotOutcome& outcome) {
    if (outcome.letter_alice.index != outcome.letter_bob.index) {
        ++tally.letter_errors;
        tally.wrong_bits += static_cast<std::uint64_t>(
            std::popcount(outcome.letter_alice.bits() ^ outcome.letter_bob.bits()));
    }
    tally.sum_n += static_cast<std::uint64_t>(outcome.n_alice);
    tally.sum_n2 += static_cast<std::uint64_t>(outcome.n_alice) *
                    static_cast<std::uint64_t>(outcome.n_alice);
    ++tally.letter_counts[static_cast<std::size_t>(outcome.letter_alice.index)];
}

SessionResult finalize(const SessionConfig& config, const Tally& tally, int bits) {
    SessionResult result;
    result.slots = config.slots;
    const double n_slots = static_cast<double>(config.slots);
    result.letter_error_rate = static_cast<double>(tally.letter_errors) / n_slots;
    result.bit_error_rate_eq14 = result.letter_error_rate / static_cast<double>(bits);
    result.bit_error_rate_hamming =
        static_cast<double>(tally.wrong_bits) / (n_slots * static_cast<double>(bits));
    result.empirical_letter_freq.reserve(tally.letter_counts.size());
    for (std::uint64_t count : tally.letter_counts) {
        result.empirical_letter_freq.push_back(static_cast<double>(count) / n_slots);
    }
    result.empirical_mean = static_cast<double>(tally.sum_n) / n_slots;
    const double m2 = static_cast<double>(tally.sum_n2) / n_slots;
    const double variance = m2 - result.empirical_mean * result.empirical_mean;
    result.empirical_mandel_q =
        result.empirical_mean > 0.0
            ? (variance - result.empirical_mean) / result.empirical_mean
            : std::numeric_limits<double>::quiet_NaN();
    return result;
}

}  // namespace

int sample_photon_number(const PhotonDistribution& dist, double draw) {
    if (!(draw >= 0.0) || draw >= 1.0) {
        throw validation_error("draw must lie in [0, 1)");
    }
    return sample_from_cdf(dist.cdf(), draw);
}

SessionResult run_session(const SessionConfig& config, int threads) {
    check_config(config);
    if (threads < 1) {
        throw validation_error("thread count must be at least 1");
    }
    const SessionPlan plan = make_plan(config);

    const std::uint64_t n_shards =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), config.slots);
    std::vector<Tally> tallies(n_shards, Tally(config.alphabet_size));

    auto work = [&](std::uint64_t shard) {
        const std::uint64_t begin = config.slots * shard / n_shards;
        const std::uint64_t end = config.slots * (shard + 1) / n_shards;
        Tally& tally = tallies[shard];
        for (std::uint64_t slot = begin; slot < end; ++slot) {
            tally_slot(tally, process_slot(config, plan, slot));
        }
    };

    if (n_shards == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_shards);
        for (std::uint64_t shard = 0; shard < n_shards; ++shard) {
            pool.emplace_back(work, shard);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    Tally total(config.alphabet_size);
    for (const Tally& tally : tallies) {
        total.merge(tally);
    }
    return finalize(config, total, plan.bits);
}

SessionResult run_session_with_records(const SessionConfig& config,
                                       std::vector<SlotRecord>& records) {
    check_config(config);
    const SessionPlan plan = make_plan(config);
    Tally tally(config.alphabet_size);
    records.clear();
    records.reserve(config.slots);
    for (std::uint64_t slot = 0; slot < config.slots; ++slot) {
        const SlotOutcome outcome = process_slot(config, plan, slot);
        tally_slot(tally, outcome);
        records.push_back(SlotRecord{slot, outcome.n_alice, outcome.n_bob,
                                     outcome.letter_alice, outcome.letter_bob});
    }
    return finalize(config, tally, plan.bits);
}

KeyComparison compare_keys(std::span<const int> letters_a,
                           std::span<const int> letters_b, int m) {
    if (m != 2 && m != 4 && m != 8) {
        throw validation_error("alphabet size must be 2, 4 or 8");
    }
    if (letters_a.size() != letters_b.size()) {
        throw validation_error("letter sequences differ in length");
    }
    if (letters_a.empty()) {
        throw validation_error("letter sequences are empty");
    }
    const int bits = m == 2 ? 1 : (m == 4 ? 2 : 3);
    std::uint64_t letter_errors = 0;
    std::uint64_t wrong_bits = 0;
    for (std::size_t i = 0; i < letters_a.size(); ++i) {
        const int a = letters_a[i];
        const int b = letters_b[i];
        if (a < 0 || a >= m || b < 0 || b >= m) {
            throw validation_error("letter index out of range for alphabet");
        }
        if (a != b) {
            ++letter_errors;
            wrong_bits += static_cast<std::uint64_t>(
                std::popcount(static_cast<unsigned>(a) ^ static_cast<unsigned>(b)));
        }
    }
    const double length = static_cast<double>(letters_a.size());
    KeyComparison cmp;
    cmp.letter_error_rate = static_cast<double>(letter_errors) / length;
    cmp.bit_error_rate_eq14 = cmp.letter_error_rate / static_cast<double>(bits);
    cmp.bit_error_rate_hamming =
        static_cast<double>(wrong_bits) / (length * static_cast<double>(bits));
    return cmp;
}

EmpiricalStats empirical_stats(std::span<const int> counts) {
    if (counts.size() < 2) {
        throw validation_error("need at least two counts");
    }
    std::uint64_t sum = 0;
    std::uint64_t sum2 = 0;
    for (int c : counts) {
        if (c < 0) {
            throw validation_error("photon counts must be nonnegative");
        }
        sum += static_cast<std::uint64_t>(c);
        sum2 += static_cast<std::uint64_t>(c) * static_cast<std::uint64_t>(c);
    }
    const double n = static_cast<double>(counts.size());
    EmpiricalStats stats;
    stats.mean = static_cast<double>(sum) / n;
    if (stats.mean <= 0.0) {
        throw validation_error("mandel q is undefined for zero mean");
    }
    const double variance = static_cast<double>(sum2) / n - stats.mean * stats.mean;
    stats.mandel_q = (variance - stats.mean) / stats.mean;
    return stats;
}

}  // namespace tmcc
