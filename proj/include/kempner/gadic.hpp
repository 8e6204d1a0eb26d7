#pragma once

#include "kempner/bigint.hpp"
#include "kempner/errors.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kempner {

/**
 * A divisibility-chain numeration system: bases g_0 = 1, g_{k+1} = g_k * d_k
 * with every quotient d_k >= 2. Integers get a unique mixed-radix expansion
 * n = sum c_i * g_i with 0 <= c_i < d_i and nonzero leading digit.
 *
 * Three rules are supported:
 *   constant(d)        d, d, d, ...
 *   periodic(list)     list repeated forever
 *   explicit prefix    a stored list, optionally continued by repeating its
 *                      last entry; without continuation the sequence is
 *                      finite and quotients beyond the prefix are an error.
 */
class GadicSequence {
public:
    enum class Kind { Constant, Periodic, Explicit };
    enum class Continuation { None, RepeatLast };

    static GadicSequence constant(std::uint32_t d);
    static GadicSequence periodic(std::vector<std::uint32_t> quotients);
    static GadicSequence explicit_prefix(std::vector<std::uint32_t> quotients,
                                         Continuation cont = Continuation::None);

    Kind kind() const noexcept { return kind_; }
    Continuation continuation() const noexcept { return continuation_; }
    const std::vector<std::uint32_t>& stored_quotients() const noexcept { return quotients_; }

    // True unless this is a finite explicit prefix with no continuation.
    bool is_total() const noexcept {
        return kind_ != Kind::Explicit || continuation_ == Continuation::RepeatLast;
    }

    // d_i. Throws structural_error past the prefix of a finite sequence.
    std::uint32_t quotient(std::size_t i) const;

    // Declare a uniform bound on all quotients. Must dominate every stored
    // quotient (and the continuation).
    void declare_bound(std::uint32_t d);

    // The declared bound if any, else a bound derived from the rule when the
    // rule itself guarantees one (constant, periodic, repeat-last explicit).
    // Finite explicit sequences have no bound unless one is declared.
    std::optional<std::uint32_t> bound() const;

    // g_0..g_k, exact.
    std::vector<BigInt> bases(std::size_t k) const;

    // g_m, exact.
    BigInt base(std::size_t m) const;

    // Grammar: "constant:<d>", "periodic:<d0>,<d1>,...", "explicit:<d0>,...".
    // An "explicit:" list may end with ",..." meaning repeat-last.
    static GadicSequence parse(std::string_view spec);
    std::string format() const;

    bool operator==(const GadicSequence& other) const = default;

private:
    GadicSequence(Kind kind, std::vector<std::uint32_t> quotients, Continuation cont);

    Kind kind_;
    std::vector<std::uint32_t> quotients_;
    Continuation continuation_;
    std::optional<std::uint32_t> declared_bound_;
};

/**
 * A mixed-radix digit string, least significant digit first, paired with the
 * per-position radices it was produced under. Canonical form: the top digit
 * is nonzero; the empty vector represents 0.
 */
struct DigitVector {
    std::vector<std::uint32_t> digits;
    std::vector<std::uint32_t> radices;

    std::size_t length() const noexcept { return digits.size(); }

    // Validating constructor: digit bounds and a nonzero top digit.
    static DigitVector make(std::vector<std::uint32_t> digits,
                            std::vector<std::uint32_t> radices);

    bool operator==(const DigitVector& other) const = default;
};

// Digits of n, least significant first; empty for n = 0.
DigitVector encode(const GadicSequence& seq, const BigInt& n);

// sum c_i * g_i. Throws structural_error if dv's radices do not match seq.
BigInt decode(const GadicSequence& seq, const DigitVector& dv);

// The unique m >= 1 with g_{m-1} <= n <= g_m - 1; equals encode(n).length().
// Throws std::domain_error for n = 0.
std::size_t level_of(const GadicSequence& seq, const BigInt& n);

} // namespace kempner
