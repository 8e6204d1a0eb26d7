#pragma once

#include "kempner/digit_sets.hpp"
#include "kempner/interval.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace kempner {

/**
 * Two-sided enclosure of S = sum over the family of a^{-sigma}. The lower
 * endpoint is the down-rounded partial sum over levels <= levels_exact; the
 * upper endpoint adds exact level counts through levels_counted and a
 * geometric bound with ratio tail_ratio beyond that, all rounded up.
 */
struct SumEnclosure {
    double sigma = 0.0;
    std::size_t levels_exact = 0;   // M
    std::size_t levels_counted = 0; // M'
    Interval sum;                   // [lower, upper] containing S
    Interval partial;               // encloses the partial sum itself
    Interval counted_tail;          // levels M+1..M', upper-bound terms
    Interval analytic_tail;         // geometric remainder beyond M'
    Interval tail_ratio;            // r = d^{1-sigma} e^{-(1-lambda d)^2/(2d)}

    double lower() const { return sum.lo_double(); }
    double upper() const { return sum.hi_double(); }
    double width() const { return sum.width(); }
};

// Sum of a^{-sigma} over members a < g_M, by enumeration, with directed
// rounding on both endpoints. M = 0 gives the empty sum.
Interval partial_sum(const LambdaFamily& fam, double sigma, std::size_t M,
                     std::uint64_t budget = kDefaultEnumerationBudget);

// Requires the bounded regime (quotient bound d, lambda < 1/d) and a
// geometric ratio r < 1 at this sigma; M <= M_prime.
SumEnclosure sum_enclosure(const LambdaFamily& fam, double sigma, std::size_t M,
                           std::size_t M_prime, std::uint64_t budget = kDefaultEnumerationBudget);

struct EnclosureRow {
    std::size_t M = 0;
    bool ok = false;
    SumEnclosure enclosure; // valid when ok
    std::string error;      // set when not ok
};

// One enclosure per requested M (ascending), each with M' = M + tail_depth.
// Failures are captured per row instead of aborting the table.
std::vector<EnclosureRow> convergence_table(const LambdaFamily& fam, double sigma,
                                            std::vector<std::size_t> M_list,
                                            std::size_t tail_depth = 200,
                                            std::uint64_t budget = kDefaultEnumerationBudget);

} // namespace kempner
