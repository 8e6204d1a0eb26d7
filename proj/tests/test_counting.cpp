#include "doctest.h"

#include "kempner/counting.hpp"
#include "kempner/digit_sets.hpp"
#include "kempner/errors.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

using namespace kempner;

namespace {

LambdaFamily decimal_no9(const BigRat& lambda = BigRat(0)) {
    return LambdaFamily(GadicSequence::constant(10), ForbiddenSpec::uniform({9}), lambda);
}

// Direct scan of J_m: digits of n padded with zeros up to length m.
std::vector<BigInt> brute_distribution(const LambdaFamily& fam, std::size_t m) {
    std::uint64_t g = 1;
    std::vector<std::uint32_t> radices(m);
    for (std::size_t i = 0; i < m; ++i) {
        radices[i] = fam.sequence().quotient(i);
        g *= radices[i];
    }
    std::vector<BigInt> counts(m + 1, BigInt(0));
    for (std::uint64_t n = 0; n < g; ++n) {
        std::uint64_t rest = n;
        std::size_t violations = 0;
        for (std::size_t i = 0; i < m; ++i) {
            if (fam.forbidden().forbids(i, static_cast<std::uint32_t>(rest % radices[i])))
                ++violations;
            rest /= radices[i];
        }
        ++counts[violations];
    }
    return counts;
}

} // namespace

TEST_CASE("violation distribution closed forms") {
    const auto dist2 = violation_distribution(decimal_no9(), 2);
    CHECK(dist2.m == 2);
    CHECK(dist2.counts == std::vector<BigInt>{81, 18, 1});
    CHECK(dist2.total == 100);

    const auto dist3 = violation_distribution(decimal_no9(), 3);
    CHECK(dist3.counts == std::vector<BigInt>{729, 243, 27, 1});

    const auto binary = LambdaFamily(GadicSequence::constant(2), ForbiddenSpec::uniform({1}), BigRat(0));
    CHECK(violation_distribution(binary, 3).counts == std::vector<BigInt>{1, 3, 3, 1});

    const auto mixed =
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(0));
    CHECK(violation_distribution(mixed, 2).counts == std::vector<BigInt>{2, 3, 1});
}

TEST_CASE("violation distribution equals a direct scan") {
    const LambdaFamily fams[] = {
        decimal_no9(),
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(0)),
        LambdaFamily(GadicSequence::constant(10),
                     ForbiddenSpec::per_position({{0, {0, 9}}, {2, {5}}}, {9}), BigRat(0)),
        LambdaFamily(GadicSequence::explicit_prefix({2, 3, 4, 5, 6},
                                                    GadicSequence::Continuation::RepeatLast),
                     ForbiddenSpec::uniform({1}), BigRat(0)),
    };
    for (const auto& fam : fams) {
        for (std::size_t m = 1; m <= 4; ++m) {
            const auto dist = violation_distribution(fam, m);
            CHECK(dist.counts == brute_distribution(fam, m));
        }
    }
}

TEST_CASE("lower tail sums exactly with a rational threshold") {
    const auto dist = violation_distribution(decimal_no9(), 2);
    CHECK(lower_tail(dist, BigRat(0)) == BigRat(81, 100));
    CHECK(lower_tail(dist, BigRat(1, 2)) == BigRat(81, 100)); // floor lands on 0
    CHECK(lower_tail(dist, BigRat(1)) == BigRat(99, 100));
    CHECK(lower_tail(dist, BigRat(2)) == BigRat(1));
    CHECK(lower_tail(dist, BigRat(7)) == BigRat(1));
}

TEST_CASE("level member counts match hand values") {
    const auto fam = decimal_no9();
    const std::size_t expected[] = {8, 72, 648};
    for (std::size_t m = 1; m <= 3; ++m) {
        const auto lc = count_members_level(fam, m);
        CHECK(lc.members_in_Im == BigInt(expected[m - 1]));
    }
    CHECK(count_members_level(fam, 4).members_in_Jm == BigInt(6561)); // 9^4
    CHECK(count_members_level(fam, 1).members_in_Jm == BigInt(9));
}

TEST_CASE("level member counts equal enumeration") {
    const LambdaFamily fams[] = {
        decimal_no9(),
        decimal_no9(BigRat(1, 4)),
        decimal_no9(BigRat(1)),
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(1, 10)),
        LambdaFamily(GadicSequence::constant(10),
                     ForbiddenSpec::per_position({{0, {0, 9}}, {2, {5}}}, {9}), BigRat(1, 4)),
    };
    for (const auto& fam : fams) {
        for (std::size_t m = 1; m <= 4; ++m) {
            const auto lc = count_members_level(fam, m);
            CHECK(lc.members_in_Im == BigInt(collect_members(fam, m).size()));
        }
    }
}

TEST_CASE("members of J_m split into levels plus zero when zero is admissible") {
    // lambda = 1: every integer below g_m belongs, so J_m holds g_m of them
    const auto fam = decimal_no9(BigRat(1));
    const auto lc = count_members_level(fam, 3);
    CHECK(lc.members_in_Jm == BigInt(1000));
    CHECK(lc.members_in_Im == BigInt(900));
}

TEST_CASE("incremental counter agrees with single-shot counting") {
    const LambdaFamily fams[] = {
        decimal_no9(BigRat(1, 4)),
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(0)),
    };
    for (const auto& fam : fams) {
        LevelCounter counter(fam);
        for (std::size_t m = 1; m <= 12; ++m) {
            counter.advance_to(m);
            CHECK(counter.level() == m);
            const auto inc = counter.current();
            const auto one = count_members_level(fam, m);
            CHECK(inc.members_in_Im == one.members_in_Im);
            CHECK(inc.members_in_Jm == one.members_in_Jm);
            CHECK(counter.distribution().counts == violation_distribution(fam, m).counts);
        }
    }
}

TEST_CASE("tail probability examples") {
    CHECK(tail_probability(decimal_no9(), 1) == BigRat(9, 10));
    CHECK(tail_probability(decimal_no9(), 2) == BigRat(81, 100));
    const auto mixed =
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(1, 2));
    CHECK(tail_probability(mixed, 2) == BigRat(5, 6)); // threshold 1: (2 + 3)/6
}

TEST_CASE("monte carlo is reproducible bit for bit") {
    const auto fam = decimal_no9(BigRat(1, 4));
    const auto a = monte_carlo_tail(fam, 12, 40000, 12345);
    const auto b = monte_carlo_tail(fam, 12, 40000, 12345);
    CHECK(a.successes == b.successes);
    CHECK(a.estimate == b.estimate);
    CHECK(a.std_error == b.std_error);
    CHECK(a.samples == 40000);
}

TEST_CASE("monte carlo concentrates around the exact probability") {
    const LambdaFamily fams[] = {
        decimal_no9(BigRat(1, 10)),
        decimal_no9(BigRat(1, 4)),
        LambdaFamily(GadicSequence::periodic({2, 3}), ForbiddenSpec::uniform({1}), BigRat(1, 4)),
    };
    std::uint64_t seed = 7;
    for (const auto& fam : fams) {
        for (const std::size_t m : {5, 16}) {
            const auto exact = tail_probability(fam, m);
            const double p = rat_num(exact).convert_to<double>() / rat_den(exact).convert_to<double>();
            const auto est = monte_carlo_tail(fam, m, 20000, seed++);
            const double se = est.std_error > 0 ? est.std_error : 1e-9;
            CHECK(std::fabs(est.estimate - p) <= 5.0 * se);
        }
    }
}

TEST_CASE("degenerate families in monte carlo") {
    // lambda = 1 admits everything
    const auto mc = monte_carlo_tail(decimal_no9(BigRat(1)), 8, 1000, 99);
    CHECK(mc.successes == 1000);
    CHECK(mc.estimate == 1.0);
    CHECK(mc.std_error == 0.0);
}
