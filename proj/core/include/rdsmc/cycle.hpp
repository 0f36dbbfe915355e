#pragma once

#include <compare>
#include <cstddef>
#include <vector>

namespace rdsmc {

/// A directed cycle over distinct states, stored in canonical rotation
/// (smallest state first). Self-loops are cycles of length one. Cycles of
/// length <= 2 coincide with their reversal.
class Cycle {
 public:
  /// Throws PreconditionError on empty input or repeated states.
  explicit Cycle(std::vector<std::size_t> states);

  const std::vector<std::size_t>& states() const noexcept { return seq_; }
  std::size_t length() const noexcept { return seq_.size(); }

  Cycle reversed() const;
  bool self_reverse() const { return seq_.size() <= 2; }

  bool contains(std::size_t i) const noexcept;
  /// True when i -> j is one of the cycle's edges.
  bool has_edge(std::size_t i, std::size_t j) const noexcept;

  friend bool operator==(const Cycle&, const Cycle&) = default;
  friend auto operator<=>(const Cycle& a, const Cycle& b) { return a.seq_ <=> b.seq_; }

 private:
  std::vector<std::size_t> seq_;
};

}  // namespace rdsmc
