#include "kempner/digit_sets.hpp"

#include <algorithm>
#include <limits>

namespace kempner {

namespace {

std::vector<std::uint32_t> sorted_unique(std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

void validate_against_radix(const std::vector<std::uint32_t>& set, std::uint32_t d,
                            const std::string& where) {
    if (set.empty()) throw std::invalid_argument("forbidden set " + where + " is empty");
    if (set.back() >= d)
        throw std::invalid_argument("forbidden digit " + std::to_string(set.back()) + " " + where +
                                    " is out of range for radix " + std::to_string(d));
    if (set.size() >= d)
        throw std::invalid_argument("forbidden set " + where + " covers all of [0," +
                                    std::to_string(d - 1) + "]; a proper subset is required");
}

// Validate every resolved set U_i against its radix d_i. The stored
// quotients cover each radix class once; the default set must fit a class
// whenever some position of that class is not overridden (always, except a
// singleton class of an explicit prefix whose one position is overridden).
void validate_family(const GadicSequence& seq, const ForbiddenSpec& forb) {
    const auto& stored = seq.stored_quotients();
    for (std::size_t j = 0; j < stored.size(); ++j) {
        bool default_applies = true;
        if (seq.kind() == GadicSequence::Kind::Explicit &&
            !(j == stored.size() - 1 &&
              seq.continuation() == GadicSequence::Continuation::RepeatLast))
            default_applies = !forb.overrides().count(j);
        if (default_applies)
            validate_against_radix(forb.default_set(), stored[j],
                                   "at position " + std::to_string(j));
    }
    for (const auto& [i, set] : forb.overrides()) {
        std::uint32_t d = 0;
        try {
            d = seq.quotient(i);
        } catch (const structural_error&) {
            throw std::invalid_argument("forbidden override at position " + std::to_string(i) +
                                        " lies beyond the finite sequence");
        }
        validate_against_radix(set, d, "at position " + std::to_string(i));
    }
}

} // namespace

ForbiddenSpec::ForbiddenSpec(std::map<std::size_t, std::vector<std::uint32_t>> overrides,
                             std::vector<std::uint32_t> default_digits)
    : overrides_(std::move(overrides)), default_(std::move(default_digits)) {}

ForbiddenSpec ForbiddenSpec::uniform(std::vector<std::uint32_t> digits) {
    auto set = sorted_unique(std::move(digits));
    if (set.empty()) throw std::invalid_argument("forbidden set must be nonempty");
    return ForbiddenSpec({}, std::move(set));
}

ForbiddenSpec ForbiddenSpec::per_position(std::map<std::size_t, std::vector<std::uint32_t>> overrides,
                                          std::vector<std::uint32_t> default_digits) {
    auto def = sorted_unique(std::move(default_digits));
    if (def.empty()) throw std::invalid_argument("default forbidden set must be nonempty");
    std::map<std::size_t, std::vector<std::uint32_t>> cleaned;
    for (auto& [i, set] : overrides) {
        auto s = sorted_unique(std::move(set));
        if (s.empty())
            throw std::invalid_argument("forbidden set at position " + std::to_string(i) +
                                        " must be nonempty");
        cleaned.emplace(i, std::move(s));
    }
    return ForbiddenSpec(std::move(cleaned), std::move(def));
}

const std::vector<std::uint32_t>& ForbiddenSpec::at(std::size_t i) const {
    auto it = overrides_.find(i);
    return it == overrides_.end() ? default_ : it->second;
}

bool ForbiddenSpec::forbids(std::size_t i, std::uint32_t digit) const {
    const auto& set = at(i);
    return std::binary_search(set.begin(), set.end(), digit);
}

LambdaFamily::LambdaFamily(GadicSequence seq, ForbiddenSpec forb, BigRat lambda)
    : seq_(std::move(seq)), forb_(std::move(forb)), lambda_(std::move(lambda)) {
    if (lambda_ < 0 || lambda_ > 1)
        throw std::domain_error("lambda must lie in [0, 1], got " + to_string(lambda_));
    validate_family(seq_, forb_);
}

bool LambdaFamily::in_bounded_regime() const {
    const auto d = seq_.bound();
    if (!d) return false;
    return lambda_ * BigInt(*d) < 1;
}

std::uint64_t LambdaFamily::violation_threshold(std::size_t m) const {
    const BigInt t = rat_floor(lambda_ * BigInt(static_cast<std::uint64_t>(m)));
    return t.convert_to<std::uint64_t>();
}

IndexSet IndexSet::finite(std::vector<std::uint64_t> elements) {
    std::sort(elements.begin(), elements.end());
    elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
    IndexSet s;
    s.kind_ = Kind::Finite;
    s.elements_ = std::move(elements);
    return s;
}

IndexSet IndexSet::arithmetic(std::uint64_t first, std::uint64_t step) {
    if (step == 0) throw std::invalid_argument("arithmetic index step must be >= 1");
    IndexSet s;
    s.kind_ = Kind::Arithmetic;
    s.first_ = first;
    s.step_ = step;
    return s;
}

IndexSet IndexSet::all() { return arithmetic(0, 1); }

bool IndexSet::contains(std::uint64_t i) const {
    if (kind_ == Kind::Finite)
        return std::binary_search(elements_.begin(), elements_.end(), i);
    return i >= first_ && (i - first_) % step_ == 0;
}

std::uint64_t IndexSet::count_upto(std::uint64_t k) const {
    if (kind_ == Kind::Finite) {
        auto it = std::upper_bound(elements_.begin(), elements_.end(), k);
        return static_cast<std::uint64_t>(it - elements_.begin());
    }
    if (k < first_) return 0;
    return (k - first_) / step_ + 1;
}

IndexedFamily::IndexedFamily(GadicSequence seq, ForbiddenSpec forb, IndexSet index,
                             bool strict_implicit_zeros)
    : seq_(std::move(seq)), forb_(std::move(forb)), index_(std::move(index)),
      strict_(strict_implicit_zeros) {
    validate_family(seq_, forb_);
}

// ---------------------------------------------------------------------------
// Membership

std::uint64_t violation_count(const LambdaFamily& fam, const BigInt& n) {
    if (n <= 0) throw std::domain_error("violation count is defined for positive integers only");
    const DigitVector dv = encode(fam.sequence(), n);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < dv.length(); ++i)
        if (fam.forbidden().forbids(i, dv.digits[i])) ++count;
    return count;
}

bool is_member_lambda(const LambdaFamily& fam, const BigInt& n) {
    if (n <= 0) throw std::domain_error("membership is defined for positive integers only");
    const DigitVector dv = encode(fam.sequence(), n);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < dv.length(); ++i)
        if (fam.forbidden().forbids(i, dv.digits[i])) ++count;
    // count <= lambda * m, cross-multiplied in exact integers.
    const BigInt lhs = BigInt(count) * rat_den(fam.lambda());
    const BigInt rhs = rat_num(fam.lambda()) * BigInt(static_cast<std::uint64_t>(dv.length()));
    return lhs <= rhs;
}

namespace {

// Strict mode: does some indexed position i >= m forbid the digit 0? The
// forbidden sets do not vary with the radix, so beyond the finitely many
// overrides only the default set matters.
bool tail_forbids_zero(const IndexedFamily& fam, std::size_t m) {
    const auto& index = fam.index();
    const auto& forb = fam.forbidden();

    if (index.is_finite()) {
        for (auto i : index.elements())
            if (i >= m && forb.forbids(i, 0)) return true;
        return false;
    }
    // Infinite arithmetic set: some non-overridden indexed position >= m
    // always exists, so the default set decides unless an override does.
    const auto& def = forb.default_set();
    if (std::binary_search(def.begin(), def.end(), 0u)) return true;
    for (const auto& [i, set] : forb.overrides())
        if (i >= m && index.contains(i) && std::binary_search(set.begin(), set.end(), 0u))
            return true;
    return false;
}

} // namespace

bool is_member_indexed(const IndexedFamily& fam, const BigInt& n) {
    if (n <= 0) throw std::domain_error("membership is defined for positive integers only");
    const DigitVector dv = encode(fam.sequence(), n);
    const std::size_t m = dv.length();
    const auto& index = fam.index();
    const auto& forb = fam.forbidden();

    if (index.is_finite()) {
        for (auto i : index.elements()) {
            if (i < m) {
                if (forb.forbids(i, dv.digits[i])) return false;
            } else if (fam.strict_implicit_zeros() && forb.forbids(i, 0)) {
                return false;
            }
        }
        return true;
    }

    for (std::uint64_t i = index.first(); i < m; i += index.step())
        if (forb.forbids(i, dv.digits[i])) return false;

    if (fam.strict_implicit_zeros() && tail_forbids_zero(fam, m)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Enumeration

void enumerate_members(const LambdaFamily& fam, std::size_t m,
                       const std::function<bool(std::uint64_t)>& yield, std::uint64_t budget) {
    if (m == 0) return;
    if (budget > (1ull << 62)) throw std::invalid_argument("enumeration budget above 2^62 is not supported");
    const BigInt gm = fam.sequence().base(m);
    if (gm > budget)
        throw resource_error("enumeration budget exceeded: g_m = " + to_string(gm) +
                             " is larger than the budget " + std::to_string(budget));

    std::vector<std::uint32_t> radix(m);
    std::vector<std::uint64_t> base(m);
    std::uint64_t g = 1;
    for (std::size_t i = 0; i < m; ++i) {
        radix[i] = fam.sequence().quotient(i);
        base[i] = g;
        g *= radix[i];
    }
    const std::uint64_t threshold = fam.violation_threshold(m);
    const auto& forb = fam.forbidden();

    // Depth-first over digits, most significant first, so values come out in
    // increasing order. Prune once the violation budget is spent.
    std::function<bool(std::size_t, std::uint64_t, std::uint64_t)> walk =
        [&](std::size_t pos, std::uint64_t value, std::uint64_t violations) -> bool {
        const std::uint32_t d = radix[pos];
        const std::uint32_t start = (pos == m - 1) ? 1u : 0u;
        for (std::uint32_t c = start; c < d; ++c) {
            const std::uint64_t v = violations + (forb.forbids(pos, c) ? 1u : 0u);
            if (v > threshold) continue;
            const std::uint64_t val = value + static_cast<std::uint64_t>(c) * base[pos];
            if (pos == 0) {
                if (!yield(val)) return false;
            } else {
                if (!walk(pos - 1, val, v)) return false;
            }
        }
        return true;
    };
    walk(m - 1, 0, 0);
}

std::vector<std::uint64_t> collect_members(const LambdaFamily& fam, std::size_t m,
                                           std::uint64_t budget) {
    std::vector<std::uint64_t> out;
    enumerate_members(
        fam, m,
        [&](std::uint64_t v) {
            out.push_back(v);
            return true;
        },
        budget);
    return out;
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

std::uint64_t parse_u64(std::string_view s, std::size_t& pos, const char* what) {
    if (pos >= s.size() || s[pos] < '0' || s[pos] > '9')
        throw parse_error(std::string("expected ") + what, pos);
    std::uint64_t value = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        const std::uint64_t digit = static_cast<std::uint64_t>(s[pos] - '0');
        if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10)
            throw parse_error(std::string(what) + " is too large", pos);
        value = value * 10 + digit;
        ++pos;
    }
    return value;
}

std::vector<std::uint32_t> parse_digit_set(std::string_view s, std::size_t& pos) {
    if (pos >= s.size() || s[pos] != '{') throw parse_error("expected '{'", pos);
    ++pos;
    std::vector<std::uint32_t> digits;
    if (pos < s.size() && s[pos] == '}') throw parse_error("forbidden set must be nonempty", pos);
    for (;;) {
        std::uint64_t d = parse_u64(s, pos, "digit");
        if (d > 0x7fffffffu) throw parse_error("digit is too large", pos);
        digits.push_back(static_cast<std::uint32_t>(d));
        if (pos < s.size() && s[pos] == ',') {
            ++pos;
            continue;
        }
        break;
    }
    if (pos >= s.size() || s[pos] != '}') throw parse_error("expected '}'", pos);
    ++pos;
    return digits;
}

} // namespace

ForbiddenSpec ForbiddenSpec::parse(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon == std::string_view::npos ? spec.size() : colon);

    if (head == "uniform") {
        if (colon == std::string_view::npos) throw parse_error("expected ':' after 'uniform'", head.size());
        std::size_t pos = colon + 1;
        auto digits = parse_digit_set(spec, pos);
        if (pos != spec.size()) throw parse_error("trailing characters in forbidden spec", pos);
        return uniform(std::move(digits));
    }
    if (head == "per-position") {
        if (colon == std::string_view::npos)
            throw parse_error("expected ':' after 'per-position'", head.size());
        std::size_t pos = colon + 1;
        std::map<std::size_t, std::vector<std::uint32_t>> overrides;
        std::optional<std::vector<std::uint32_t>> default_set;
        for (;;) {
            if (spec.substr(pos, 8) == "default=") {
                pos += 8;
                if (default_set) throw parse_error("duplicate default entry", pos);
                default_set = parse_digit_set(spec, pos);
            } else {
                const std::size_t at = pos;
                std::uint64_t i = parse_u64(spec, pos, "position index or 'default'");
                if (pos >= spec.size() || spec[pos] != '=') throw parse_error("expected '='", pos);
                ++pos;
                auto set = parse_digit_set(spec, pos);
                if (!overrides.emplace(static_cast<std::size_t>(i), std::move(set)).second)
                    throw parse_error("duplicate position " + std::to_string(i), at);
            }
            if (pos < spec.size() && spec[pos] == ';') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos != spec.size()) throw parse_error("trailing characters in forbidden spec", pos);
        if (!default_set)
            throw parse_error("per-position spec requires a default={...} entry", spec.size());
        return per_position(std::move(overrides), std::move(*default_set));
    }
    throw parse_error("unknown forbidden rule '" + std::string(head) +
                          "' (expected uniform or per-position)",
                      0);
}

std::string ForbiddenSpec::format() const {
    const auto render = [](const std::vector<std::uint32_t>& set) {
        std::string out = "{";
        for (std::size_t i = 0; i < set.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(set[i]);
        }
        return out + "}";
    };
    if (is_uniform()) return "uniform:" + render(default_);
    std::string out = "per-position:";
    for (const auto& [i, set] : overrides_) out += std::to_string(i) + "=" + render(set) + ";";
    out += "default=" + render(default_);
    return out;
}

IndexSet IndexSet::parse(std::string_view spec) {
    if (spec == "all") return all();
    const std::size_t colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon == std::string_view::npos ? spec.size() : colon);

    if (head == "finite") {
        if (colon == std::string_view::npos) throw parse_error("expected ':' after 'finite'", head.size());
        std::size_t pos = colon + 1;
        std::vector<std::uint64_t> elements;
        for (;;) {
            elements.push_back(parse_u64(spec, pos, "index"));
            if (pos < spec.size() && spec[pos] == ',') {
                ++pos;
                continue;
            }
            break;
        }
        if (pos != spec.size()) throw parse_error("trailing characters in index spec", pos);
        return finite(std::move(elements));
    }
    if (head == "arith") {
        if (colon == std::string_view::npos) throw parse_error("expected ':' after 'arith'", head.size());
        std::size_t pos = colon + 1;
        if (spec.substr(pos, 6) != "first=") throw parse_error("expected 'first='", pos);
        pos += 6;
        const std::uint64_t first = parse_u64(spec, pos, "first index");
        if (spec.substr(pos, 6) != ",step=") throw parse_error("expected ',step='", pos);
        pos += 6;
        const std::uint64_t step = parse_u64(spec, pos, "step");
        if (pos != spec.size()) throw parse_error("trailing characters in index spec", pos);
        if (step == 0) throw parse_error("step must be >= 1", pos);
        return arithmetic(first, step);
    }
    throw parse_error("unknown index rule '" + std::string(head) +
                          "' (expected finite, arith, or all)",
                      0);
}

std::string IndexSet::format() const {
    if (kind_ == Kind::Finite) {
        std::string out = "finite:";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(elements_[i]);
        }
        return out;
    }
    if (first_ == 0 && step_ == 1) return "all";
    return "arith:first=" + std::to_string(first_) + ",step=" + std::to_string(step_);
}

BigRat parse_rational(std::string_view text) {
    if (text.empty()) throw parse_error("empty rational", 0);
    if (text.find('.') != std::string_view::npos)
        throw parse_error("decimals are not accepted here; write an exact rational like 1/4",
                          text.find('.'));
    const std::size_t slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return BigRat(BigInt(std::string(text)));
        const BigInt num{std::string(text.substr(0, slash))};
        const BigInt den{std::string(text.substr(slash + 1))};
        if (den == 0) throw parse_error("zero denominator", slash + 1);
        return BigRat(num, den);
    } catch (const parse_error&) {
        throw;
    } catch (const std::runtime_error& e) {
        throw parse_error(std::string("malformed rational: ") + e.what(), 0);
    }
}

} // namespace kempner
