#pragma once

#include <string>
#include <vector>

#include "tmcc/photon_stats.hpp"

namespace tmcc {

/// One letter of an m-ary alphabet together with its natural binary code.
struct Letter {
    int index = 0;  // 0 .. m-1
    int width = 1;  // log2 m

    unsigned bits() const { return static_cast<unsigned>(index); }
    std::string bit_string() const;

    friend bool operator==(const Letter&, const Letter&) = default;
};

/// Partition of the photon counts {0, 1, 2, ...} into m contiguous regions
/// around a center count c (the rounded mean photon number).
///
///   m = 2:  n <= c | n > c
///   m = 4:  n <= c-1 | c | c+1 | n >= c+2
///   m = 8:  n <= c-3 | c-2 | c-1 | c | c+1 | c+2 | c+3 | n >= c+4
///
/// Regions that contain no nonnegative count are permitted (they simply
/// carry zero probability); empty_letters() lists them so callers can warn.
struct AlphabetSpec {
    int size = 2;    // m, one of 2, 4, 8
    int center = 0;  // c >= 0

    AlphabetSpec(int size, int center);

    int bits_per_letter() const;
    /// Indices of letters whose region lies entirely below zero.
    std::vector<int> empty_letters() const;
};

/// Round-half-up rounding of the mean photon number; defines the partition
/// center used everywhere.
int center_from_mean(double mean);

/// Letter assigned to a photon count. Total over all n >= 0; the binary
/// tie n == center goes to letter 0, which keeps the 2-letter partition a
/// coarsening of the 4-letter one.
Letter encode_letter(int n, const AlphabetSpec& spec);

/// Letter probabilities: region sums of `dist`. Always sums to exactly what
/// `dist` sums to (a partition moves mass, it cannot lose any).
std::vector<double> letter_pmf(const PhotonDistribution& dist, const AlphabetSpec& spec);

/// Shannon entropy in bits of the letter distribution for an m-ary alphabet
/// centered at the rounded mean of `state`.
double alphabet_entropy(const TmccState& state, int m);

}  // namespace tmcc
