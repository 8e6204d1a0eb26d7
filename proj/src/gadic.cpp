#include "kempner/gadic.hpp"

#include <charconv>
#include <limits>

namespace kempner {

namespace {

constexpr std::uint32_t kMaxQuotient = 0x7fffffffu;

void check_quotient(std::uint64_t d, std::size_t position, const char* what) {
    if (d < 2) throw parse_error(std::string(what) + " must be >= 2", position);
    if (d > kMaxQuotient)
        throw parse_error(std::string(what) + " exceeds the supported maximum 2^31-1", position);
}

} // namespace

GadicSequence::GadicSequence(Kind kind, std::vector<std::uint32_t> quotients, Continuation cont)
    : kind_(kind), quotients_(std::move(quotients)), continuation_(cont) {}

GadicSequence GadicSequence::constant(std::uint32_t d) {
    if (d < 2) throw std::invalid_argument("quotient must be >= 2");
    return GadicSequence(Kind::Constant, {d}, Continuation::None);
}

GadicSequence GadicSequence::periodic(std::vector<std::uint32_t> quotients) {
    if (quotients.empty()) throw std::invalid_argument("periodic sequence needs at least one quotient");
    for (auto d : quotients)
        if (d < 2) throw std::invalid_argument("every quotient must be >= 2");
    return GadicSequence(Kind::Periodic, std::move(quotients), Continuation::None);
}

GadicSequence GadicSequence::explicit_prefix(std::vector<std::uint32_t> quotients, Continuation cont) {
    if (quotients.empty()) throw std::invalid_argument("explicit sequence needs at least one quotient");
    for (auto d : quotients)
        if (d < 2) throw std::invalid_argument("every quotient must be >= 2");
    return GadicSequence(Kind::Explicit, std::move(quotients), cont);
}

std::uint32_t GadicSequence::quotient(std::size_t i) const {
    switch (kind_) {
    case Kind::Constant:
        return quotients_[0];
    case Kind::Periodic:
        return quotients_[i % quotients_.size()];
    case Kind::Explicit:
        if (i < quotients_.size()) return quotients_[i];
        if (continuation_ == Continuation::RepeatLast) return quotients_.back();
        throw structural_error("quotient index " + std::to_string(i) +
                               " is beyond the stored prefix of a finite sequence (length " +
                               std::to_string(quotients_.size()) + ")");
    }
    throw std::logic_error("unreachable");
}

void GadicSequence::declare_bound(std::uint32_t d) {
    for (auto q : quotients_)
        if (q > d)
            throw std::invalid_argument("declared bound " + std::to_string(d) +
                                        " is below stored quotient " + std::to_string(q));
    declared_bound_ = d;
}

std::optional<std::uint32_t> GadicSequence::bound() const {
    if (declared_bound_) return declared_bound_;
    if (!is_total()) return std::nullopt;
    std::uint32_t max = 0;
    for (auto q : quotients_) max = std::max(max, q);
    return max;
}

std::vector<BigInt> GadicSequence::bases(std::size_t k) const {
    std::vector<BigInt> g;
    g.reserve(k + 1);
    g.push_back(1);
    for (std::size_t i = 0; i < k; ++i) g.push_back(g.back() * quotient(i));
    return g;
}

BigInt GadicSequence::base(std::size_t m) const {
    BigInt g = 1;
    for (std::size_t i = 0; i < m; ++i) g *= quotient(i);
    return g;
}

DigitVector DigitVector::make(std::vector<std::uint32_t> digits, std::vector<std::uint32_t> radices) {
    if (digits.size() != radices.size())
        throw std::invalid_argument("digit and radix lists differ in length");
    for (std::size_t i = 0; i < digits.size(); ++i) {
        if (radices[i] < 2) throw std::invalid_argument("every radix must be >= 2");
        if (digits[i] >= radices[i])
            throw std::invalid_argument("digit " + std::to_string(digits[i]) +
                                        " out of range for radix " + std::to_string(radices[i]) +
                                        " at position " + std::to_string(i));
    }
    if (!digits.empty() && digits.back() == 0)
        throw std::invalid_argument("top digit must be nonzero (canonical form)");
    return DigitVector{std::move(digits), std::move(radices)};
}

DigitVector encode(const GadicSequence& seq, const BigInt& n) {
    if (n < 0) throw std::domain_error("encode requires n >= 0");
    DigitVector dv;
    // Small inputs stay in machine words; the general path divides BigInts.
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        std::uint64_t rest = n.convert_to<std::uint64_t>();
        for (std::size_t i = 0; rest != 0; ++i) {
            const std::uint32_t d = seq.quotient(i);
            dv.digits.push_back(static_cast<std::uint32_t>(rest % d));
            dv.radices.push_back(d);
            rest /= d;
        }
        return dv;
    }
    BigInt rest = n;
    for (std::size_t i = 0; rest != 0; ++i) {
        const std::uint32_t d = seq.quotient(i);
        dv.digits.push_back((rest % d).convert_to<std::uint32_t>());
        dv.radices.push_back(d);
        rest /= d;
    }
    return dv;
}

BigInt decode(const GadicSequence& seq, const DigitVector& dv) {
    const std::size_t m = dv.length();
    if (dv.radices.size() != m)
        throw structural_error("digit vector has mismatched digit/radix lengths");
    for (std::size_t i = 0; i < m; ++i) {
        if (dv.radices[i] != seq.quotient(i))
            throw structural_error("radix mismatch at position " + std::to_string(i) + ": vector has " +
                                   std::to_string(dv.radices[i]) + ", sequence has " +
                                   std::to_string(seq.quotient(i)));
        if (dv.digits[i] >= dv.radices[i])
            throw structural_error("digit out of range at position " + std::to_string(i));
    }
    BigInt value = 0;
    for (std::size_t i = m; i-- > 0;) {
        value *= dv.radices[i];
        value += dv.digits[i];
    }
    return value;
}

std::size_t level_of(const GadicSequence& seq, const BigInt& n) {
    if (n <= 0) throw std::domain_error("level is defined for positive integers only");
    if (n <= std::numeric_limits<std::uint64_t>::max()) {
        std::uint64_t rest = n.convert_to<std::uint64_t>();
        std::size_t m = 0;
        while (rest != 0) rest /= seq.quotient(m++);
        return m;
    }
    BigInt rest = n;
    std::size_t m = 0;
    while (rest != 0) rest /= seq.quotient(m++);
    return m;
}

// ---------------------------------------------------------------------------
// Grammar

namespace {

std::uint64_t parse_nat(std::string_view s, std::size_t& pos, const char* what) {
    if (pos >= s.size() || s[pos] < '0' || s[pos] > '9')
        throw parse_error(std::string("expected ") + what, pos);
    std::uint64_t value = 0;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        value = value * 10 + static_cast<std::uint64_t>(s[pos] - '0');
        if (value > std::numeric_limits<std::uint32_t>::max())
            throw parse_error(std::string(what) + " is too large", pos);
        ++pos;
    }
    return value;
}

} // namespace

GadicSequence GadicSequence::parse(std::string_view spec) {
    const std::size_t colon = spec.find(':');
    const std::string_view head = spec.substr(0, colon == std::string_view::npos ? spec.size() : colon);

    if (head == "constant") {
        if (colon == std::string_view::npos) throw parse_error("expected ':' after 'constant'", head.size());
        std::size_t pos = colon + 1;
        std::uint64_t d = parse_nat(spec, pos, "quotient");
        check_quotient(d, colon + 1, "quotient");
        if (pos != spec.size()) throw parse_error("trailing characters in sequence spec", pos);
        return constant(static_cast<std::uint32_t>(d));
    }
    if (head == "periodic" || head == "explicit") {
        if (colon == std::string_view::npos)
            throw parse_error("expected ':' after '" + std::string(head) + "'", head.size());
        std::vector<std::uint32_t> quotients;
        Continuation cont = Continuation::None;
        std::size_t pos = colon + 1;
        for (;;) {
            if (head == "explicit" && spec.substr(pos) == "...") {
                cont = Continuation::RepeatLast;
                pos += 3;
                break;
            }
            const std::size_t at = pos;
            std::uint64_t d = parse_nat(spec, pos, "quotient");
            check_quotient(d, at, "quotient");
            quotients.push_back(static_cast<std::uint32_t>(d));
            if (pos == spec.size()) break;
            if (spec[pos] != ',') throw parse_error("expected ',' between quotients", pos);
            ++pos;
        }
        if (quotients.empty()) throw parse_error("sequence needs at least one quotient", colon + 1);
        if (pos != spec.size()) throw parse_error("trailing characters in sequence spec", pos);
        if (head == "periodic") return periodic(std::move(quotients));
        return explicit_prefix(std::move(quotients), cont);
    }
    throw parse_error("unknown sequence rule '" + std::string(head) +
                          "' (expected constant, periodic, or explicit)",
                      0);
}

std::string GadicSequence::format() const {
    std::string out;
    switch (kind_) {
    case Kind::Constant:
        return "constant:" + std::to_string(quotients_[0]);
    case Kind::Periodic:
        out = "periodic:";
        break;
    case Kind::Explicit:
        out = "explicit:";
        break;
    }
    for (std::size_t i = 0; i < quotients_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(quotients_[i]);
    }
    if (continuation_ == Continuation::RepeatLast) out += ",...";
    return out;
}

} // namespace kempner
