#pragma once

#include "kempner/bigint.hpp"
#include "kempner/digit_sets.hpp"
#include "kempner/interval.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace kempner {

struct ChernoffParams {
    double mu = 0.0;
    double delta = 0.0;
    // Optional Bernoulli means; when present their sum must match mu.
    std::optional<std::vector<double>> p;
};

// E/b, an upper bound on Pr(X >= b) for any nonnegative X with mean E.
Interval markov_bound(double expectation, double b);

// e^{-mu delta^2 / 2}, an upper bound on Pr(X <= (1 - delta) mu) for a sum
// of independent Bernoulli variables with mean mu. Requires delta in (0,1).
Interval chernoff_lower_tail(const ChernoffParams& params);
Interval chernoff_lower_tail(const BigRat& mu, const BigRat& delta);

// h(delta) = (1 - delta) log(1 - delta) + delta - delta^2/2. Positive on
// (0,1); this is the slack that makes the lower-tail exponent valid.
Interval chernoff_h(double delta);

// Harmonic-style mean of the radices against the forbidden-set sizes:
// 1/d_m* = (1/m) sum_{i<m} |U_i|/d_i. Exact; 0 < d_m* <= d.
BigRat d_star(const LambdaFamily& fam, std::size_t m);

// delta_m = 1 - lambda d_m*. Regime error when lambda d_m* >= 1.
BigRat chernoff_delta(const LambdaFamily& fam, std::size_t m);

// e^{-(1 - lambda d)^2 m / (2d)} * g_m: upper bound on the number of level-m
// members. Requires a uniform quotient bound d and lambda < 1/d.
Interval level_count_bound(const LambdaFamily& fam, std::size_t m);

// 1 - (1 - lambda d)^2 / (2 d ln d): upper bound on the abscissa of
// convergence of sum a^{-sigma} over the family. Always < 1 in-regime.
Interval abscissa_bound(std::uint32_t d, const BigRat& lambda);

// The open window (abscissa_bound, 1) of exponents sigma for which the
// level-wise geometric ratio is < 1.
struct SigmaWindow {
    Interval low;
    double high = 1.0;
};
SigmaWindow sigma_window(std::uint32_t d, const BigRat& lambda);

// r = d^{1-sigma} e^{-(1 - lambda d)^2/(2d)}: the per-level decay ratio of
// the summation tail. The tail bound is valid whenever r < 1.
Interval geometric_ratio(std::uint32_t d, const BigRat& lambda, double sigma);

enum class Verdict { Converges, Diverges, Inconclusive };
const char* to_string(Verdict v);

struct CriterionWitness {
    std::uint64_t k = 0;
    std::uint64_t index_count = 0; // I(k)
    double conv_threshold = 0.0;   // (1 + delta) ln k / ln(d/(d-1))
    double div_threshold = 0.0;    // (1 - delta) ln k / ln d
    bool conv_holds = false;       // I(k) >= conv threshold, decided exactly
    bool div_holds = false;        // I(k) <= div threshold, decided exactly
};

/**
 * Outcome of the index-density criterion over a tested range [k_lo, k_hi].
 * converges: I(k) >= (1 + delta) ln k / ln(d/(d-1)) held at every k in
 * [k_threshold, k_hi]; diverges: I(k) <= (1 - delta) ln k / ln d held at
 * every k in [k_threshold, k_hi]; the deciding inequality must hold at k_hi
 * itself. Verdicts describe the tested range only, never the asymptotics.
 */
struct CriterionVerdict {
    Verdict verdict = Verdict::Inconclusive;
    BigRat delta;
    std::uint64_t k_lo = 0;
    std::uint64_t k_hi = 0;
    std::uint64_t k_threshold = 0; // meaningful unless inconclusive
    CriterionWitness at_min, at_max;
};

// delta must lie in (0,1) and is kept rational so threshold ties are decided
// exactly. d must be >= 2 and dominate every quotient of fam's sequence.
CriterionVerdict criterion_check(const IndexedFamily& fam, std::uint32_t d, const BigRat& delta,
                                 std::uint64_t k_lo, std::uint64_t k_hi);

} // namespace kempner
