#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace tasbm {

// Number of total orders of elements 0..n-1 consistent with every relation
// (a, b) meaning a precedes b. Zero if the relations contain a cycle. Dynamic
// programming over order ideals (down-closed subsets); n <= 24.
std::uint64_t count_linear_extensions(int n, std::span<const std::pair<int, int>> precedes);

}  // namespace tasbm
