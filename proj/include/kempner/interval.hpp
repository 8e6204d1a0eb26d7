#pragma once

#include "kempner/bigint.hpp"

#include <mpfr.h>

#include <cstddef>
#include <string>

namespace kempner {

// Working precision in bits for newly created interval endpoints.
void set_interval_precision(mpfr_prec_t bits);
mpfr_prec_t interval_precision();

/**
 * Closed interval [lo, hi] with mpfr endpoints. Every operation rounds the
 * low endpoint toward -inf and the high endpoint toward +inf, so the exact
 * real result is always enclosed regardless of precision.
 */
class Interval {
public:
    Interval();               // [0, 0]
    Interval(const Interval& other);
    Interval(Interval&& other) noexcept;
    Interval& operator=(const Interval& other);
    Interval& operator=(Interval&& other) noexcept;
    ~Interval();

    static Interval exact_double(double x); // singleton at the binary value of x
    static Interval hull(double lo, double hi);
    static Interval from_ui(unsigned long x);
    static Interval from_bigint(const BigInt& n);
    static Interval from_rational(const BigRat& q);

    double lo_double() const; // rounded down
    double hi_double() const; // rounded up

    // Decimal scientific notation with the stated significant digits,
    // rounded down / up respectively.
    std::string lo_string(std::size_t digits) const;
    std::string hi_string(std::size_t digits) const;

    bool is_singleton() const;
    bool contains(double x) const;
    bool contains(const Interval& other) const; // lo <= other.lo && other.hi <= hi
    double width() const;                       // hi - lo, rounded up

    Interval& operator+=(const Interval& other);
    Interval& operator-=(const Interval& other);

    // Raw endpoint access for the few hot loops that accumulate in place.
    mpfr_srcptr lo_raw() const { return lo_; }
    mpfr_srcptr hi_raw() const { return hi_; }
    mpfr_ptr lo_raw() { return lo_; }
    mpfr_ptr hi_raw() { return hi_; }

private:
    mpfr_t lo_;
    mpfr_t hi_;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator-(const Interval& a); // negation
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b); // b must exclude 0

Interval exp(const Interval& a);
Interval log(const Interval& a);                  // requires a.lo > 0
Interval pow(const Interval& a, const Interval& b); // requires a.lo > 0

// a.hi < b.lo: every value of a is below every value of b.
bool strictly_less(const Interval& a, const Interval& b);

} // namespace kempner
