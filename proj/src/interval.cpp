#include "kempner/interval.hpp"

#include "kempner/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace kempner {

namespace {

mpfr_prec_t g_precision = 128;

void require(bool ok, const char* message) {
    if (!ok) throw std::domain_error(message);
}

} // namespace

void set_interval_precision(mpfr_prec_t bits) {
    if (bits < MPFR_PREC_MIN || bits > 1 << 24)
        throw std::invalid_argument("interval precision must be between " +
                                    std::to_string(MPFR_PREC_MIN) + " and 2^24 bits");
    g_precision = bits;
}

mpfr_prec_t interval_precision() { return g_precision; }

Interval::Interval() {
    mpfr_init2(lo_, g_precision);
    mpfr_init2(hi_, g_precision);
    mpfr_set_zero(lo_, 0);
    mpfr_set_zero(hi_, 0);
}

Interval::Interval(const Interval& other) {
    mpfr_init2(lo_, mpfr_get_prec(other.lo_));
    mpfr_init2(hi_, mpfr_get_prec(other.hi_));
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Interval::Interval(Interval&& other) noexcept {
    mpfr_init2(lo_, MPFR_PREC_MIN);
    mpfr_init2(hi_, MPFR_PREC_MIN);
    mpfr_swap(lo_, other.lo_);
    mpfr_swap(hi_, other.hi_);
}

Interval& Interval::operator=(const Interval& other) {
    if (this != &other) {
        mpfr_set_prec(lo_, mpfr_get_prec(other.lo_));
        mpfr_set_prec(hi_, mpfr_get_prec(other.hi_));
        mpfr_set(lo_, other.lo_, MPFR_RNDD);
        mpfr_set(hi_, other.hi_, MPFR_RNDU);
    }
    return *this;
}

Interval& Interval::operator=(Interval&& other) noexcept {
    if (this != &other) {
        mpfr_swap(lo_, other.lo_);
        mpfr_swap(hi_, other.hi_);
    }
    return *this;
}

Interval::~Interval() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
}

Interval Interval::exact_double(double x) {
    Interval r;
    mpfr_set_d(r.lo_, x, MPFR_RNDD);
    mpfr_set_d(r.hi_, x, MPFR_RNDU);
    return r;
}

Interval Interval::hull(double lo, double hi) {
    if (lo > hi) throw std::invalid_argument("hull endpoints out of order");
    Interval r;
    mpfr_set_d(r.lo_, lo, MPFR_RNDD);
    mpfr_set_d(r.hi_, hi, MPFR_RNDU);
    return r;
}

Interval Interval::from_ui(unsigned long x) {
    Interval r;
    mpfr_set_ui(r.lo_, x, MPFR_RNDD);
    mpfr_set_ui(r.hi_, x, MPFR_RNDU);
    return r;
}

Interval Interval::from_bigint(const BigInt& n) {
    const std::string s = n.str();
    Interval r;
    mpfr_set_str(r.lo_, s.c_str(), 10, MPFR_RNDD);
    mpfr_set_str(r.hi_, s.c_str(), 10, MPFR_RNDU);
    return r;
}

Interval Interval::from_rational(const BigRat& q) {
    return from_bigint(rat_num(q)) / from_bigint(rat_den(q));
}

double Interval::lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
double Interval::hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

namespace {

std::string format_endpoint(mpfr_srcptr x, std::size_t digits, mpfr_rnd_t rnd) {
    char* raw = nullptr;
    if (mpfr_asprintf(&raw, "%.*R*e", static_cast<int>(digits), rnd, x) < 0)
        throw std::runtime_error("mpfr formatting failed");
    std::string out(raw);
    mpfr_free_str(raw);
    return out;
}

} // namespace

std::string Interval::lo_string(std::size_t digits) const {
    return format_endpoint(lo_, digits, MPFR_RNDD);
}

std::string Interval::hi_string(std::size_t digits) const {
    return format_endpoint(hi_, digits, MPFR_RNDU);
}

bool Interval::is_singleton() const { return mpfr_equal_p(lo_, hi_) != 0; }

bool Interval::contains(double x) const {
    return mpfr_cmp_d(lo_, x) <= 0 && mpfr_cmp_d(hi_, x) >= 0;
}

bool Interval::contains(const Interval& other) const {
    return mpfr_lessequal_p(lo_, other.lo_) && mpfr_lessequal_p(other.hi_, hi_);
}

double Interval::width() const {
    mpfr_t w;
    mpfr_init2(w, g_precision);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double out = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return out;
}

Interval& Interval::operator+=(const Interval& other) {
    mpfr_add(lo_, lo_, other.lo_, MPFR_RNDD);
    mpfr_add(hi_, hi_, other.hi_, MPFR_RNDU);
    return *this;
}

Interval& Interval::operator-=(const Interval& other) {
    mpfr_sub(lo_, lo_, other.hi_, MPFR_RNDD);
    mpfr_sub(hi_, hi_, other.lo_, MPFR_RNDU);
    return *this;
}

Interval operator+(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_add(r.lo_raw(), a.lo_raw(), b.lo_raw(), MPFR_RNDD);
    mpfr_add(r.hi_raw(), a.hi_raw(), b.hi_raw(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a, const Interval& b) {
    Interval r;
    mpfr_sub(r.lo_raw(), a.lo_raw(), b.hi_raw(), MPFR_RNDD);
    mpfr_sub(r.hi_raw(), a.hi_raw(), b.lo_raw(), MPFR_RNDU);
    return r;
}

Interval operator-(const Interval& a) {
    Interval r;
    mpfr_neg(r.lo_raw(), a.hi_raw(), MPFR_RNDD);
    mpfr_neg(r.hi_raw(), a.lo_raw(), MPFR_RNDU);
    return r;
}

namespace {

// Evaluate op over all endpoint pairs with both roundings and take the hull.
template <typename Op>
Interval corner_hull(const Interval& a, const Interval& b, Op op) {
    Interval r;
    mpfr_t t;
    mpfr_init2(t, interval_precision());
    mpfr_srcptr xs[2] = {a.lo_raw(), a.hi_raw()};
    mpfr_srcptr ys[2] = {b.lo_raw(), b.hi_raw()};
    bool first = true;
    for (mpfr_srcptr x : xs)
        for (mpfr_srcptr y : ys) {
            op(t, x, y, MPFR_RNDD);
            if (first || mpfr_less_p(t, r.lo_raw())) mpfr_set(r.lo_raw(), t, MPFR_RNDD);
            op(t, x, y, MPFR_RNDU);
            if (first || mpfr_greater_p(t, r.hi_raw())) mpfr_set(r.hi_raw(), t, MPFR_RNDU);
            first = false;
        }
    mpfr_clear(t);
    return r;
}

} // namespace

Interval operator*(const Interval& a, const Interval& b) {
    return corner_hull(a, b, [](mpfr_ptr out, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t rnd) {
        mpfr_mul(out, x, y, rnd);
    });
}

Interval operator/(const Interval& a, const Interval& b) {
    const bool positive = mpfr_sgn(b.lo_raw()) > 0;
    const bool negative = mpfr_sgn(b.hi_raw()) < 0;
    require(positive || negative, "interval division by an interval containing zero");
    return corner_hull(a, b, [](mpfr_ptr out, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t rnd) {
        mpfr_div(out, x, y, rnd);
    });
}

Interval exp(const Interval& a) {
    Interval r;
    mpfr_exp(r.lo_raw(), a.lo_raw(), MPFR_RNDD);
    mpfr_exp(r.hi_raw(), a.hi_raw(), MPFR_RNDU);
    return r;
}

Interval log(const Interval& a) {
    require(mpfr_sgn(a.lo_raw()) > 0, "interval log requires a positive interval");
    Interval r;
    mpfr_log(r.lo_raw(), a.lo_raw(), MPFR_RNDD);
    mpfr_log(r.hi_raw(), a.hi_raw(), MPFR_RNDU);
    return r;
}

Interval pow(const Interval& a, const Interval& b) {
    require(mpfr_sgn(a.lo_raw()) > 0, "interval pow requires a positive base");
    // x^y is monotone in each argument separately on a positive box, so the
    // extrema sit at corners.
    return corner_hull(a, b, [](mpfr_ptr out, mpfr_srcptr x, mpfr_srcptr y, mpfr_rnd_t rnd) {
        mpfr_pow(out, x, y, rnd);
    });
}

bool strictly_less(const Interval& a, const Interval& b) {
    return mpfr_less_p(a.hi_raw(), b.lo_raw()) != 0;
}

} // namespace kempner
