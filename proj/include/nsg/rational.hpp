#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace nsg {

// Exact arbitrary-precision rational. mpq_class keeps values canonical
// (gcd 1, positive denominator) after canonicalize().
using Rat = mpq_class;

inline Rat rat(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

// Parses "num/den" or "num".
inline Rat rat_from_string(const std::string& s) {
    Rat r;
    if (r.set_str(s, 10) != 0)
        throw std::invalid_argument("bad rational literal: " + s);
    r.canonicalize();
    return r;
}

inline std::string rat_to_string(const Rat& r) {
    return r.get_str();  // "num/den", or "num" when den == 1
}

// 2^e as an exact rational, e may be negative.
inline Rat rat_pow2(long e) {
    Rat r;
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), Rat(1).get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), Rat(1).get_mpq_t(), static_cast<unsigned long>(-e));
    return r;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace nsg
