#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace credal::detail {

// Strides of a mixed-radix index whose first digit is most significant.
inline std::vector<std::size_t> radix_strides(std::span<const std::size_t> cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t j = cards.size(); j-- > 1;) strides[j - 1] = strides[j] * cards[j];
  return strides;
}

inline std::size_t radix_size(std::span<const std::size_t> cards) {
  std::size_t n = 1;
  for (auto c : cards) n *= c;
  return n;
}

// Advances `digits` like an odometer (last digit fastest). Returns false
// after the last configuration.
inline bool radix_next(std::vector<std::size_t>& digits, std::span<const std::size_t> cards) {
  for (std::size_t j = digits.size(); j-- > 0;) {
    if (++digits[j] < cards[j]) return true;
    digits[j] = 0;
  }
  return false;
}

}  // namespace credal::detail
