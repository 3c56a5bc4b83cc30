#include "tmcc/alphabet.hpp"

#include <cmath>

#include "tmcc/errors.hpp"

namespace tmcc {

namespace {

void check_size(int m) {
    if (m != 2 && m != 4 && m != 8) {
        throw validation_error("alphabet size must be 2, 4 or 8");
    }
}

}  // namespace

std::string Letter::bit_string() const {
    std::string s(static_cast<std::size_t>(width), '0');
    for (int b = 0; b < width; ++b) {
        if (index & (1 << (width - 1 - b))) {
            s[static_cast<std::size_t>(b)] = '1';
        }
    }
    return s;
}

AlphabetSpec::AlphabetSpec(int size_, int center_) : size(size_), center(center_) {
    check_size(size);
    if (center < 0) {
        throw validation_error("alphabet center must be nonnegative");
    }
}

int AlphabetSpec::bits_per_letter() const {
    return size == 2 ? 1 : (size == 4 ? 2 : 3);
}

std::vector<int> AlphabetSpec::empty_letters() const {
    // The last region always reaches +inf; the first region (n <= c - half)
    // and the single-count interior letters can fall entirely below zero
    // when the center is small.
    std::vector<int> empty;
    if (size == 2) {
        return empty;
    }
    const int half = size / 2 - 1;  // interior letters below center: c-1 (m=4), c-3..c-1 (m=8)
    if (center - half < 0) {
        empty.push_back(0);  // region n <= center - half is all negative
    }
    for (int j = 1; j <= size - 2; ++j) {
        const int count = center - half + j;  // the single count of letter j
        if (count < 0) {
            empty.push_back(j);
        }
    }
    return empty;
}

int center_from_mean(double mean) {
    if (!(mean >= 0.0)) {
        throw validation_error("mean photon number must be nonnegative");
    }
    return static_cast<int>(std::floor(mean + 0.5));
}

Letter encode_letter(int n, const AlphabetSpec& spec) {
    if (n < 0) {
        throw validation_error("photon count must be nonnegative");
    }
    const int c = spec.center;
    int index = 0;
    switch (spec.size) {
        case 2:
            index = (n > c) ? 1 : 0;
            break;
        case 4:
            if (n <= c - 1) {
                index = 0;
            } else if (n == c) {
                index = 1;
            } else if (n == c + 1) {
                index = 2;
            } else {
                index = 3;
            }
            break;
        case 8:
            if (n <= c - 3) {
                index = 0;
            } else if (n >= c + 4) {
                index = 7;
            } else {
                index = n - (c - 3);
            }
            break;
        default:
            throw validation_error("alphabet size must be 2, 4 or 8");
    }
    return Letter{index, spec.bits_per_letter()};
}

std::vector<double> letter_pmf(const PhotonDistribution& dist, const AlphabetSpec& spec) {
    std::vector<double> pmf(static_cast<std::size_t>(spec.size), 0.0);
    for (int n = 0; n <= dist.n_max; ++n) {
        pmf[static_cast<std::size_t>(encode_letter(n, spec).index)] += dist.prob(n);
    }
    return pmf;
}

double alphabet_entropy(const TmccState& state, int m) {
    check_size(m);
    const PhotonDistribution dist = build_distribution(state);
    const AlphabetSpec spec(m, center_from_mean(dist.mean()));
    return shannon_entropy(letter_pmf(dist, spec));
}

}  // namespace tmcc
