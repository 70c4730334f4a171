#include "stir/union_jack.hpp"

#include <stdexcept>

namespace stir {

UnionJackClass classify_union_jack(std::int64_t m, std::int64_t k, std::int64_t l) {
  if (m < 2 || k < 1 || l < 1 || k >= m || l >= m) {
    throw std::invalid_argument("union jack class needs m >= 2 and 1 <= k, l <= m - 1");
  }
  const bool k_half = 2 * k == m;
  const bool l_half = 2 * l == m;
  if (k_half && l_half) {
    return UnionJackClass::centre;
  }
  if (k == l || k == m - l) {
    return UnionJackClass::st_andrew;
  }
  if (k_half || l_half) {
    return UnionJackClass::st_george;
  }
  return UnionJackClass::rest;
}

std::string_view to_string(UnionJackClass c) {
  switch (c) {
    case UnionJackClass::centre:
      return "C";
    case UnionJackClass::st_andrew:
      return "A";
    case UnionJackClass::st_george:
      return "G";
    case UnionJackClass::rest:
      return "R";
  }
  return "?";
}

}  // namespace stir
