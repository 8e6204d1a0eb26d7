#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace kempner {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& x) { return x.str(); }
inline std::string to_string(const BigRat& x) {
    return boost::multiprecision::numerator(x).str() + "/" +
           boost::multiprecision::denominator(x).str();
}

inline BigInt rat_num(const BigRat& x) { return BigInt(boost::multiprecision::numerator(x)); }
inline BigInt rat_den(const BigRat& x) { return BigInt(boost::multiprecision::denominator(x)); }

// floor(x) for x >= 0.
inline BigInt rat_floor(const BigRat& x) { return rat_num(x) / rat_den(x); }

} // namespace kempner
