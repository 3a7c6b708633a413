#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testel/word.hpp"

namespace testel {

/// Permutation of {0, ..., degree-1}, acting on the right: points are pushed
/// through the letters of a word from left to right.
class Perm {
 public:
  Perm() = default;
  explicit Perm(std::size_t degree);  // identity
  explicit Perm(std::vector<int> images);

  std::size_t degree() const noexcept { return images_.size(); }
  int operator()(int point) const { return images_[static_cast<std::size_t>(point)]; }
  const std::vector<int>& images() const noexcept { return images_; }
  bool is_identity() const;

  /// Apply *this, then other.
  Perm then(const Perm& other) const;
  Perm inverse() const;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<int> images_;
};

/// Cycle notation with 1-based points, e.g. "(1,2)(3,4,5)"; "()" is the identity.
Perm parse_cycles(std::string_view text, std::size_t degree);
std::string to_cycles(const Perm& p);

/// Image of w under the homomorphism sending x_i to images[i-1].
Perm evaluate(std::span<const Perm> images, const Word& w);

/// Order of the group generated by `generators`, or nullopt past `cap`.
std::optional<std::uint64_t> group_order(std::span<const Perm> generators, std::size_t degree,
                                         std::uint64_t cap);

}  // namespace testel
