#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tmcc/alphabet.hpp"
#include "tmcc/eavesdrop.hpp"
#include "tmcc/photon_stats.hpp"

namespace tmcc {

/// A seeded Monte Carlo key-distribution session. The configuration fully
/// determines the result; worker count does not enter it.
struct SessionConfig {
    double lambda = 1.0;
    int alphabet_size = 2;  // m in {2, 4, 8}
    std::uint64_t slots = 1;
    std::uint64_t seed = 0;
    std::optional<CloneAttack> attack;  // nullopt = no eavesdropper
};

/// Sifted-key statistics of one session. `empirical_mandel_q` is NaN when
/// every drawn count was zero (the statistic is undefined there).
struct SessionResult {
    double letter_error_rate = 0.0;
    double bit_error_rate_eq14 = 0.0;     // letter errors / log2 m
    double bit_error_rate_hamming = 0.0;  // wrong bits / (slots * log2 m)
    std::vector<double> empirical_letter_freq;
    double empirical_mean = 0.0;
    double empirical_mandel_q = 0.0;
    std::uint64_t slots = 0;
};

/// One per-slot record, for --dump style inspection.
struct SlotRecord {
    std::uint64_t slot = 0;
    int n_alice = 0;
    int n_bob = 0;
    Letter letter_alice;
    Letter letter_bob;
};

/// Inverse-CDF sample: the smallest n with CDF(n) > draw, for draw in [0,1).
int sample_photon_number(const PhotonDistribution& dist, double draw);

/// Runs a session. Slots are sharded over `threads` workers (contiguous
/// ranges, integer tallies, merged in shard order), so the result is
/// bit-identical for every thread count.
SessionResult run_session(const SessionConfig& config, int threads = 1);

/// Same session, additionally materializing every per-slot record
/// (single pass, sequential).
SessionResult run_session_with_records(const SessionConfig& config,
                                       std::vector<SlotRecord>& records);

struct KeyComparison {
    double letter_error_rate = 0.0;
    double bit_error_rate_eq14 = 0.0;
    double bit_error_rate_hamming = 0.0;
};

/// Error rates between two equal-length letter streams over an m-ary
/// alphabet. Throws validation_error on length mismatch, empty input, or a
/// letter out of range.
KeyComparison compare_keys(std::span<const int> letters_a,
                           std::span<const int> letters_b, int m);

struct EmpiricalStats {
    double mean = 0.0;
    double mandel_q = 0.0;
};

/// Sample mean and sample Mandel Q of a photon-count sequence. Needs at
/// least two entries and a nonzero mean for Q.
EmpiricalStats empirical_stats(std::span<const int> counts);

}  // namespace tmcc
