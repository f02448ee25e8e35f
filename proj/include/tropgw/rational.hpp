#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace tropgw {

// Exact arbitrary-precision rational. No floating point anywhere in the core;
// doubles appear only in SVG rendering.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long n, long d = 1) { return Rat(n, d); }

// Parses "p/q", "-p/q" or plain integers. Whitespace is not accepted.
inline Rat parse_rat(const std::string& s) {
    if (s.empty() || s.find_first_not_of("-0123456789/") != std::string::npos)
        throw std::invalid_argument("not a rational: '" + s + "'");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(BigInt(s));
        BigInt num(s.substr(0, slash));
        BigInt den(s.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator");
        return Rat(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + s + "'");
    }
}

inline std::string to_string(const Rat& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

inline bool is_integer(const Rat& r) { return denominator(r) == 1; }

} // namespace tropgw
