#include "tasbm/linear_extensions.hpp"

#include <vector>

#include "tasbm/error.hpp"

namespace tasbm {

std::uint64_t count_linear_extensions(int n, std::span<const std::pair<int, int>> precedes) {
  if (n < 0 || n > 24) throw ArgumentError("linear extensions supported for 0..24 elements");
  std::vector<std::uint32_t> before(n, 0);
  for (const auto& [a, b] : precedes) {
    if (a < 0 || b < 0 || a >= n || b >= n) throw ArgumentError("relation names unknown element");
    if (a == b) return 0;
    before[b] |= 1u << a;
  }
  // ways[mask]: orderings of `mask` as a prefix. Only ideals are reachable.
  std::vector<std::uint64_t> ways(std::size_t{1} << n, 0);
  ways[0] = 1;
  for (std::uint32_t mask = 0; mask < ways.size(); ++mask) {
    if (!ways[mask]) continue;
    for (int x = 0; x < n; ++x) {
      const std::uint32_t bit = 1u << x;
      if (!(mask & bit) && (before[x] & ~mask) == 0) ways[mask | bit] += ways[mask];
    }
  }
  return ways.back();
}

}  // namespace tasbm
