#pragma once

#include <cstdint>
#include <string_view>

namespace stir {

// Classes of cut pairs (k, l) in {1..m-1}^2: centre k = l = m/2, the
// diagonals k = l or k = m - l away from the centre, the row and column
// through m/2 away from the centre, and everything else.
enum class UnionJackClass { centre, st_andrew, st_george, rest };

UnionJackClass classify_union_jack(std::int64_t m, std::int64_t k, std::int64_t l);
std::string_view to_string(UnionJackClass c);

}  // namespace stir
