#include "kempner/summation.hpp"

#include "kempner/bounds.hpp"
#include "kempner/counting.hpp"
#include "kempner/errors.hpp"

#include <algorithm>

namespace kempner {

Interval partial_sum(const LambdaFamily& fam, double sigma, std::size_t M,
                     std::uint64_t budget) {
    if (!(sigma > 0.0)) throw std::domain_error("sigma must be positive");
    if (M == 0) return Interval();
    if (fam.sequence().base(M) > budget)
        throw resource_error("partial sum at M = " + std::to_string(M) + " needs g_M = " +
                             to_string(fam.sequence().base(M)) + " enumerations, over the budget " +
                             std::to_string(budget));

    const bool harmonic = sigma == 1.0;
    const mpfr_prec_t prec = interval_precision();
    mpfr_t acc_lo, acc_hi, av, s, t;
    mpfr_inits2(prec, acc_lo, acc_hi, av, s, t, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_zero(acc_lo, 0);
    mpfr_set_zero(acc_hi, 0);
    mpfr_set_d(s, sigma, MPFR_RNDN); // doubles are exactly representable

    for (std::size_t m = 1; m <= M; ++m) {
        enumerate_members(
            fam, m,
            [&](std::uint64_t a) {
                mpfr_set_ui(av, a, MPFR_RNDN); // exact: a < 2^64 <= precision
                if (harmonic) {
                    mpfr_ui_div(t, 1, av, MPFR_RNDD);
                    mpfr_add(acc_lo, acc_lo, t, MPFR_RNDD);
                    mpfr_ui_div(t, 1, av, MPFR_RNDU);
                    mpfr_add(acc_hi, acc_hi, t, MPFR_RNDU);
                } else {
                    mpfr_pow(t, av, s, MPFR_RNDU);
                    mpfr_ui_div(t, 1, t, MPFR_RNDD);
                    mpfr_add(acc_lo, acc_lo, t, MPFR_RNDD);
                    mpfr_pow(t, av, s, MPFR_RNDD);
                    mpfr_ui_div(t, 1, t, MPFR_RNDU);
                    mpfr_add(acc_hi, acc_hi, t, MPFR_RNDU);
                }
                return true;
            },
            budget);
    }

    Interval out;
    mpfr_set(out.lo_raw(), acc_lo, MPFR_RNDD);
    mpfr_set(out.hi_raw(), acc_hi, MPFR_RNDU);
    mpfr_clears(acc_lo, acc_hi, av, s, t, static_cast<mpfr_ptr>(nullptr));
    return out;
}

SumEnclosure sum_enclosure(const LambdaFamily& fam, double sigma, std::size_t M,
                           std::size_t M_prime, std::uint64_t budget) {
    if (M > M_prime) throw std::invalid_argument("M must not exceed M'");
    const auto d = fam.sequence().bound();
    if (!d)
        throw regime_error("the sequence has no uniform quotient bound; the tail bound needs one");

    const Interval r = geometric_ratio(*d, fam.lambda(), sigma); // validates lambda < 1/d
    const Interval one = Interval::from_ui(1);
    if (!strictly_less(r, one))
        throw regime_error("the geometric tail ratio is not below 1 at sigma = " +
                           std::to_string(sigma) + "; raise sigma toward 1");

    SumEnclosure out;
    out.sigma = sigma;
    out.levels_exact = M;
    out.levels_counted = M_prime;
    out.tail_ratio = r;
    out.partial = partial_sum(fam, sigma, M, budget);

    // Upper-bound terms count_m / g_{m-1}^sigma for m = M+1..M': every
    // level-m member is at least g_{m-1}.
    Interval counted;
    if (M_prime > M) {
        const std::vector<BigInt> bases = fam.sequence().bases(M_prime);
        LevelCounter counter(fam);
        for (std::size_t m = M + 1; m <= M_prime; ++m) {
            counter.advance_to(m);
            const BigInt count = counter.current().members_in_Im;
            if (count == 0) continue;
            if (sigma == 1.0) {
                counted += Interval::from_rational(BigRat(count, bases[m - 1]));
            } else {
                counted += Interval::from_bigint(count) /
                           pow(Interval::from_bigint(bases[m - 1]), Interval::exact_double(sigma));
            }
        }
    }
    out.counted_tail = counted;

    const Interval d_sigma = pow(Interval::from_ui(*d), Interval::exact_double(sigma));
    out.analytic_tail =
        d_sigma * pow(r, Interval::from_ui(static_cast<unsigned long>(M_prime) + 1)) / (one - r);

    // The tail terms are upper bounds, so only their high endpoints matter:
    // the enclosure is [partial.lo, (partial + counted + analytic).hi].
    Interval sum = out.partial + out.counted_tail + out.analytic_tail;
    mpfr_set(sum.lo_raw(), out.partial.lo_raw(), MPFR_RNDD);
    out.sum = std::move(sum);
    return out;
}

std::vector<EnclosureRow> convergence_table(const LambdaFamily& fam, double sigma,
                                            std::vector<std::size_t> M_list,
                                            std::size_t tail_depth, std::uint64_t budget) {
    std::sort(M_list.begin(), M_list.end());
    std::vector<EnclosureRow> rows;
    rows.reserve(M_list.size());
    for (const std::size_t M : M_list) {
        EnclosureRow row;
        row.M = M;
        try {
            row.enclosure = sum_enclosure(fam, sigma, M, M + tail_depth, budget);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace kempner
