#include "doctest.h"

#include "kempner/errors.hpp"
#include "kempner/gadic.hpp"

using namespace kempner;

TEST_CASE("decimal encode matches positional digits") {
    const auto seq = GadicSequence::constant(10);
    const auto dv = encode(seq, BigInt(409));
    CHECK(dv.digits == std::vector<std::uint32_t>{9, 0, 4});
    CHECK(dv.radices == std::vector<std::uint32_t>{10, 10, 10});
    CHECK(dv.length() == 3);
    CHECK(decode(seq, dv) == BigInt(409));
}

TEST_CASE("zero encodes to the empty digit vector") {
    const auto seq = GadicSequence::constant(10);
    const auto dv = encode(seq, BigInt(0));
    CHECK(dv.length() == 0);
    CHECK(decode(seq, dv) == BigInt(0));
    CHECK_THROWS_AS(level_of(seq, BigInt(0)), std::domain_error);
    CHECK_THROWS_AS(encode(seq, BigInt(-1)), std::domain_error);
}

TEST_CASE("periodic bases and hand-checked expansion") {
    const auto seq = GadicSequence::periodic({2, 3});
    const auto g = seq.bases(4);
    CHECK(g == std::vector<BigInt>{1, 2, 6, 12, 36});
    CHECK(seq.base(4) == BigInt(36));

    const auto dv = encode(seq, BigInt(7)); // 7 = 1*6 + 0*2 + 1*1
    CHECK(dv.digits == std::vector<std::uint32_t>{1, 0, 1});
    CHECK(dv.radices == std::vector<std::uint32_t>{2, 3, 2});
    CHECK(level_of(seq, BigInt(7)) == 3);
}

TEST_CASE("round trip with level agreement on several rules") {
    const GadicSequence seqs[] = {
        GadicSequence::constant(2),
        GadicSequence::constant(10),
        GadicSequence::periodic({2, 3}),
        GadicSequence::explicit_prefix({2, 3, 4, 5, 6}, GadicSequence::Continuation::RepeatLast),
    };
    for (const auto& seq : seqs) {
        for (std::uint64_t n = 0; n <= 3000; ++n) {
            const auto dv = encode(seq, BigInt(n));
            CHECK(decode(seq, dv) == BigInt(n));
            if (n > 0) {
                CHECK(level_of(seq, BigInt(n)) == dv.length());
                CHECK(dv.digits.back() != 0);
            }
        }
    }
}

TEST_CASE("round trip for values beyond 64 bits") {
    const auto seq = GadicSequence::periodic({7, 11, 13});
    BigInt n("123456789012345678901234567890123456789");
    const auto dv = encode(seq, n);
    CHECK(decode(seq, dv) == n);
    CHECK(level_of(seq, n) == dv.length());
}

TEST_CASE("level boundaries") {
    const auto seq = GadicSequence::constant(10);
    CHECK(level_of(seq, BigInt(1)) == 1);
    CHECK(level_of(seq, BigInt(9)) == 1);
    CHECK(level_of(seq, BigInt(10)) == 2);
    CHECK(level_of(seq, BigInt(99)) == 2);
    CHECK(level_of(seq, BigInt(100)) == 3);
}

TEST_CASE("finite explicit prefixes reject use past the end") {
    const auto seq = GadicSequence::explicit_prefix({2, 3, 4});
    CHECK(!seq.is_total());
    CHECK(seq.quotient(2) == 4);
    CHECK_THROWS_AS(seq.quotient(3), structural_error);
    CHECK(decode(seq, encode(seq, BigInt(23))) == BigInt(23)); // 23 = g_3 - 1
    CHECK_THROWS_AS(encode(seq, BigInt(24)), structural_error);
    CHECK(!seq.bound().has_value());
}

TEST_CASE("repeat-last continuation extends the prefix") {
    const auto seq =
        GadicSequence::explicit_prefix({2, 3}, GadicSequence::Continuation::RepeatLast);
    CHECK(seq.is_total());
    CHECK(seq.quotient(0) == 2);
    CHECK(seq.quotient(5) == 3);
    CHECK(seq.bound() == 3);
}

TEST_CASE("declared bounds") {
    auto seq = GadicSequence::explicit_prefix({2, 3, 4});
    seq.declare_bound(5);
    CHECK(seq.bound() == 5);
    CHECK_THROWS_AS(seq.declare_bound(3), std::invalid_argument);
    CHECK(GadicSequence::periodic({2, 5, 3}).bound() == 5);
    CHECK(GadicSequence::constant(10).bound() == 10);
}

TEST_CASE("sequence grammar round trips") {
    const char* specs[] = {"constant:10", "periodic:2,3", "explicit:2,3,4", "explicit:2,3,..."};
    for (const auto* s : specs) CHECK(GadicSequence::parse(s).format() == s);
    CHECK(GadicSequence::parse("explicit:2,3,...").quotient(9) == 3);
}

TEST_CASE("sequence grammar rejections carry positions") {
    CHECK_THROWS_AS(GadicSequence::parse("constant:1"), parse_error);
    CHECK_THROWS_AS(GadicSequence::parse("constant:"), parse_error);
    CHECK_THROWS_AS(GadicSequence::parse("ternary:3"), parse_error);
    CHECK_THROWS_AS(GadicSequence::parse("periodic:2,,3"), parse_error);
    CHECK_THROWS_AS(GadicSequence::parse("periodic:2,3x"), parse_error);
    CHECK_THROWS_AS(GadicSequence::parse("constant:2147483648"), parse_error);
    try {
        GadicSequence::parse("periodic:2,3x");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(std::string(e.what()).find("(at position") != std::string::npos);
    }
}

TEST_CASE("digit vector validation") {
    CHECK_THROWS_AS(DigitVector::make({1, 0}, {10, 10}), std::invalid_argument); // zero top
    CHECK_THROWS_AS(DigitVector::make({10}, {10}), std::invalid_argument);       // digit range
    CHECK_THROWS_AS(DigitVector::make({1}, {10, 10}), std::invalid_argument);    // length mismatch
    const auto seq = GadicSequence::constant(10);
    const auto other = DigitVector::make({1, 1}, {10, 12});
    CHECK_THROWS_AS(decode(seq, other), structural_error); // radix mismatch
}
