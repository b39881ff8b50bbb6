#pragma once

#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace keyform {

using Integer = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Integer num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Integer den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline Rat make_rat(std::int64_t n, std::int64_t d = 1) {
    if (d == 0) throw std::domain_error("zero denominator");
    return Rat(Integer(n), Integer(d));
}

inline bool is_integer(const Rat& r) { return den(r) == 1; }

/// True iff r lies in (1/n)Z.
inline bool in_lattice(const Rat& r, std::int64_t n) { return Integer(n) % den(r) == 0; }

inline std::int64_t to_int64(const Integer& v) {
    if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min())
        throw std::overflow_error("integer does not fit in 64 bits: " + v.str());
    return static_cast<std::int64_t>(v);
}

/// Exact conversion; throws if r is not an integer.
inline std::int64_t to_int64(const Rat& r) {
    if (!is_integer(r)) throw std::domain_error("not an integer: " + r.str());
    return to_int64(num(r));
}

inline Integer floor_rat(const Rat& r) {
    Integer n = num(r), d = den(r);
    Integer q = n / d;
    if (n % d != 0 && n < 0) q -= 1;
    return q;
}

inline std::string to_string(const Rat& r) {
    if (is_integer(r)) return num(r).str();
    return num(r).str() + "/" + den(r).str();
}

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }
inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

}  // namespace keyform
