#pragma once

#include "kempner/bigint.hpp"
#include "kempner/digit_sets.hpp"

#include <cstdint>
#include <vector>

namespace kempner {

/**
 * Distribution of the violation count X over J_m = [0, g_m - 1] under the
 * uniform measure: counts[j] = card{n in J_m : X(n) = j}. X is a sum of
 * independent per-position indicators, so counts is the coefficient vector
 * of prod_{i=0}^{m-1} ((d_i - u_i) + u_i x) with u_i = |U_i|.
 */
struct ViolationDistribution {
    std::size_t m = 0;
    std::vector<BigInt> counts; // length m + 1
    BigInt total;               // g_m = sum of counts
};

ViolationDistribution violation_distribution(const LambdaFamily& fam, std::size_t m);

// Sum of counts[j]/total over integer j <= threshold, exact.
BigRat lower_tail(const ViolationDistribution& dist, const BigRat& threshold);

struct LevelCount {
    std::size_t m = 0;
    BigInt members_in_Im; // card(A inside [g_{m-1}, g_m - 1])
    BigInt members_in_Jm; // card{n in J_m : X(n) <= lambda m}, the bounding count
};

LevelCount count_members_level(const LambdaFamily& fam, std::size_t m);

/**
 * Incremental level counter: advancing from level m to m+1 costs one linear
 * polynomial multiply instead of recomputing the product, so sweeping a
 * range of levels is quadratic overall rather than cubic.
 */
class LevelCounter {
public:
    explicit LevelCounter(LambdaFamily fam);

    const LambdaFamily& family() const noexcept { return fam_; }
    std::size_t level() const noexcept { return m_; }

    // Move to level m (m >= current level).
    void advance_to(std::size_t m);

    // Counts at the current level; level() must be >= 1.
    LevelCount current() const;
    ViolationDistribution distribution() const;

private:
    LambdaFamily fam_;
    std::size_t m_ = 0;
    std::vector<BigInt> partial_; // coefficients over positions 0..m-2
    std::vector<BigInt> full_;    // coefficients over positions 0..m-1
    BigInt g_top_;                // g_m
};

// Pr(X <= lambda * m) over the uniform measure on J_m, exact.
BigRat tail_probability(const LambdaFamily& fam, std::size_t m);

struct McEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
    std::uint64_t successes = 0;
    std::uint64_t samples = 0;
};

// Monte-Carlo estimate of Pr(X <= lambda * m): digits drawn uniformly and
// independently per position. The sample stream is split into fixed-size
// chunks with per-chunk derived seeds, so the result is bit-for-bit
// reproducible for a given seed regardless of how chunks are scheduled.
McEstimate monte_carlo_tail(const LambdaFamily& fam, std::size_t m, std::uint64_t samples,
                            std::uint64_t seed);

} // namespace kempner
