#pragma once

#include "kempner/bigint.hpp"
#include "kempner/errors.hpp"
#include "kempner/gadic.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace kempner {

/**
 * Per-position forbidden digit sets. Each resolved set U_i must be a
 * nonempty proper subset of [0, d_i - 1]; that is validated when the spec is
 * paired with a sequence in a family.
 */
class ForbiddenSpec {
public:
    static ForbiddenSpec uniform(std::vector<std::uint32_t> digits);
    static ForbiddenSpec per_position(std::map<std::size_t, std::vector<std::uint32_t>> overrides,
                                      std::vector<std::uint32_t> default_digits);

    bool is_uniform() const noexcept { return overrides_.empty(); }

    // Sorted forbidden digits at position i (uniform set, override, or default).
    const std::vector<std::uint32_t>& at(std::size_t i) const;

    bool forbids(std::size_t i, std::uint32_t digit) const;

    // |U_i|.
    std::size_t size_at(std::size_t i) const { return at(i).size(); }

    const std::map<std::size_t, std::vector<std::uint32_t>>& overrides() const noexcept {
        return overrides_;
    }
    const std::vector<std::uint32_t>& default_set() const noexcept { return default_; }

    // Grammar: "uniform:{9}", "per-position:0={9};1={0,5};default={9}".
    static ForbiddenSpec parse(std::string_view spec);
    std::string format() const;

    bool operator==(const ForbiddenSpec& other) const = default;

private:
    ForbiddenSpec(std::map<std::size_t, std::vector<std::uint32_t>> overrides,
                  std::vector<std::uint32_t> default_digits);

    std::map<std::size_t, std::vector<std::uint32_t>> overrides_;
    std::vector<std::uint32_t> default_;
};

/**
 * The family of positive integers whose level-m expansion has at most
 * floor(lambda * m) forbidden digits. lambda is kept as an exact rational so
 * membership at the threshold is never misclassified.
 */
class LambdaFamily {
public:
    LambdaFamily(GadicSequence seq, ForbiddenSpec forb, BigRat lambda);

    const GadicSequence& sequence() const noexcept { return seq_; }
    const ForbiddenSpec& forbidden() const noexcept { return forb_; }
    const BigRat& lambda() const noexcept { return lambda_; }

    // Bounded quotients and lambda < 1/d: the regime in which the analytic
    // bounds and summation enclosures are valid.
    bool in_bounded_regime() const;

    // floor(lambda * m): the largest admissible violation count at level m.
    std::uint64_t violation_threshold(std::size_t m) const;

    bool operator==(const LambdaFamily& other) const = default;

private:
    GadicSequence seq_;
    ForbiddenSpec forb_;
    BigRat lambda_;
};

/**
 * Index set for families that forbid digits only at chosen positions.
 */
class IndexSet {
public:
    static IndexSet finite(std::vector<std::uint64_t> elements);
    static IndexSet arithmetic(std::uint64_t first, std::uint64_t step);
    static IndexSet all(); // arithmetic(0, 1)

    bool contains(std::uint64_t i) const;

    // I(k) = card{i in I : i <= k}, exact.
    std::uint64_t count_upto(std::uint64_t k) const;

    bool is_finite() const noexcept { return kind_ == Kind::Finite; }
    const std::vector<std::uint64_t>& elements() const { return elements_; }
    std::uint64_t first() const noexcept { return first_; }
    std::uint64_t step() const noexcept { return step_; }

    // Grammar: "finite:0,2,4", "arith:first=0,step=2", "all".
    static IndexSet parse(std::string_view spec);
    std::string format() const;

    bool operator==(const IndexSet& other) const = default;

private:
    enum class Kind { Finite, Arithmetic };
    IndexSet() = default;

    Kind kind_ = Kind::Arithmetic;
    std::vector<std::uint64_t> elements_; // sorted, Finite only
    std::uint64_t first_ = 0, step_ = 1;  // Arithmetic only
};

/**
 * The family of positive integers whose digit c_i avoids U_i at every
 * position i in the index set. By default the condition applies only to
 * positions present in the canonical expansion (i <= m-1); with
 * strict_implicit_zeros it also applies to the implicit zeros above the top
 * digit, so n fails whenever some indexed position i >= m forbids 0.
 */
class IndexedFamily {
public:
    IndexedFamily(GadicSequence seq, ForbiddenSpec forb, IndexSet index,
                  bool strict_implicit_zeros = false);

    const GadicSequence& sequence() const noexcept { return seq_; }
    const ForbiddenSpec& forbidden() const noexcept { return forb_; }
    const IndexSet& index() const noexcept { return index_; }
    bool strict_implicit_zeros() const noexcept { return strict_; }

    bool operator==(const IndexedFamily& other) const = default;

private:
    GadicSequence seq_;
    ForbiddenSpec forb_;
    IndexSet index_;
    bool strict_;
};

// card{i in [0, m-1] : c_i in U_i} for the canonical expansion of n.
// Throws std::domain_error for n = 0.
std::uint64_t violation_count(const LambdaFamily& fam, const BigInt& n);

// violation_count(n) <= lambda * level_of(n), compared exactly.
bool is_member_lambda(const LambdaFamily& fam, const BigInt& n);

bool is_member_indexed(const IndexedFamily& fam, const BigInt& n);

inline constexpr std::uint64_t kDefaultEnumerationBudget = 100'000'000;

// Streams the members of the family inside [g_{m-1}, g_m - 1] in increasing
// order. `yield` returns false to stop early. Throws resource_error when
// g_m exceeds the budget.
void enumerate_members(const LambdaFamily& fam, std::size_t m,
                       const std::function<bool(std::uint64_t)>& yield,
                       std::uint64_t budget = kDefaultEnumerationBudget);

// Convenience: the members collected into a vector.
std::vector<std::uint64_t> collect_members(const LambdaFamily& fam, std::size_t m,
                                           std::uint64_t budget = kDefaultEnumerationBudget);

// "p/q" or a bare integer; decimals are rejected to keep lambda exact.
BigRat parse_rational(std::string_view text);

} // namespace kempner
