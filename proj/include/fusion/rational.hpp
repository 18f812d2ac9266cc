#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fusion {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline std::string to_string(const BigInt& v) { return v.str(); }

// Canonical "p" or "p/q" form, q > 0.
inline std::string to_string(const BigRat& v) {
    if (denominator(v) == 1) return numerator(v).str();
    return numerator(v).str() + "/" + denominator(v).str();
}

inline BigRat parse_rational(const std::string& s) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return BigRat(BigInt(s));
    BigInt num(s.substr(0, slash));
    BigInt den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator: " + s);
    return BigRat(num, den);
}

inline double to_double(const BigRat& v) { return v.template convert_to<double>(); }

inline int bit_length(const BigInt& v) {
    if (v == 0) return 0;
    return static_cast<int>(msb(abs(v))) + 1;
}

}  // namespace fusion
