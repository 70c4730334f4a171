#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace stir {

// Exact rational arithmetic for Ewens weights, rate tables and oracle values.
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r{mpz_class{static_cast<long>(num)}, mpz_class{static_cast<long>(den)}};
  r.canonicalize();
  return r;
}

inline double to_double(const Rational& r) { return r.get_d(); }

inline std::string to_string(const Rational& r) { return r.get_str(); }

}  // namespace stir
