#pragma once

// Young diagrams with n boxes and at most d rows: enumeration in a fixed
// deterministic order, index lookup, box-addition sets and row-shift neighbor
// relations. This is the combinatorial substrate every matrix in the library
// is assembled over.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "estfid/errors.hpp"

namespace estfid {

using part_t = std::int32_t;

/// Weakly decreasing tuple of d nonnegative integers, stored with explicit
/// trailing zeros so that e_i / (e_i - e_j) arithmetic needs no padding logic.
struct young_diagram {
  std::vector<part_t> parts;

  friend bool operator==(const young_diagram&, const young_diagram&) = default;
  friend auto operator<=>(const young_diagram& a, const young_diagram& b) {
    return std::lexicographical_compare_three_way(a.parts.begin(), a.parts.end(),
                                                  b.parts.begin(), b.parts.end());
  }
};

inline bool weakly_decreasing(std::span<const part_t> parts) {
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (parts[i] < parts[i + 1]) return false;
  }
  return parts.empty() || parts.back() >= 0;
}

inline long long parts_sum(std::span<const part_t> parts) {
  return std::accumulate(parts.begin(), parts.end(), 0LL);
}

/// True iff `parts` is a valid diagram of the (n, d) lattice.
inline bool valid_diagram(std::span<const part_t> parts, int n, int d) {
  return static_cast<int>(parts.size()) == d && weakly_decreasing(parts) &&
         parts_sum(parts) == n;
}

/// Lexicographic three-way compare of part rows.
inline std::strong_ordering compare_rows(std::span<const part_t> a,
                                         std::span<const part_t> b) {
  return std::lexicographical_compare_three_way(a.begin(), a.end(), b.begin(), b.end());
}

inline constexpr std::size_t default_max_diagrams = 200000;

/// All diagrams of n boxes in at most d rows, ordered reverse-lexicographically
/// (largest first row first); rows stored contiguously for cache friendliness.
class lattice_index {
 public:
  lattice_index(int n, int d, std::size_t max_diagrams = default_max_diagrams)
      : n_(n), d_(d) {
    if (n < 0 || d < 1) throw dimension_error("lattice_index: need n >= 0, d >= 1");
    std::vector<part_t> row(static_cast<std::size_t>(d));
    enumerate_from(0, n, n, row, max_diagrams);
  }

  int n() const noexcept { return n_; }
  int d() const noexcept { return d_; }
  std::size_t size() const noexcept { return flat_.size() / d_; }

  std::span<const part_t> diagram(std::size_t k) const {
    return std::span<const part_t>(flat_.data() + k * d_, static_cast<std::size_t>(d_));
  }

  young_diagram diagram_copy(std::size_t k) const {
    auto row = diagram(k);
    return young_diagram{std::vector<part_t>(row.begin(), row.end())};
  }

  /// Zero-based index of a diagram, or nullopt if it is not in the lattice.
  std::optional<std::size_t> position(std::span<const part_t> parts) const {
    if (static_cast<int>(parts.size()) != d_) return std::nullopt;
    std::size_t lo = 0, hi = size();
    while (lo < hi) {  // rows are sorted descending-lex
      std::size_t mid = lo + (hi - lo) / 2;
      auto cmp = compare_rows(diagram(mid), parts);
      if (cmp == std::strong_ordering::equal) return mid;
      if (cmp == std::strong_ordering::greater) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return std::nullopt;
  }

  std::optional<std::size_t> position(const young_diagram& mu) const {
    return position(std::span<const part_t>(mu.parts));
  }

  /// Debug dump: one diagram per line as comma-separated parts.
  void dump(std::ostream& os) const {
    for (std::size_t k = 0; k < size(); ++k) {
      auto row = diagram(k);
      for (int i = 0; i < d_; ++i) {
        if (i) os << ',';
        os << row[static_cast<std::size_t>(i)];
      }
      os << '\n';
    }
  }

 private:
  void enumerate_from(int slot, int rem, int max_part, std::vector<part_t>& row,
                      std::size_t max_diagrams) {
    const int slots_left = d_ - slot;
    if (slot == d_) {
      if (rem != 0) return;
      if (size() >= max_diagrams) {
        throw capacity_error("lattice_index: diagram count for n=" + std::to_string(n_) +
                             ", d=" + std::to_string(d_) + " exceeds cap " +
                             std::to_string(max_diagrams));
      }
      flat_.insert(flat_.end(), row.begin(), row.end());
      return;
    }
    // Descending first choice keeps the global order reverse-lexicographic.
    const int hi = std::min(max_part, rem);
    const int lo = (rem + slots_left - 1) / slots_left;  // ceil: must fit in remaining slots
    for (int p = hi; p >= lo; --p) {
      row[static_cast<std::size_t>(slot)] = static_cast<part_t>(p);
      enumerate_from(slot + 1, rem - p, p, row, max_diagrams);
    }
  }

  int n_, d_;
  std::vector<part_t> flat_;
};

/// Convenience: enumerate the (n, d) lattice.
inline lattice_index enumerate(int n, int d,
                               std::size_t max_diagrams = default_max_diagrams) {
  return lattice_index(n, d, max_diagrams);
}

/// Number of valid single-box additions mu + e_i (i.e. #(mu + box)).
inline int add_box_count(std::span<const part_t> mu) {
  int count = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (i == 0 || mu[i - 1] > mu[i]) ++count;
  }
  return count;
}

/// All valid diagrams mu + e_i, in reverse-lexicographic order.
inline std::vector<young_diagram> add_box_set(const young_diagram& mu) {
  std::vector<young_diagram> out;
  for (std::size_t i = 0; i < mu.parts.size(); ++i) {
    if (i == 0 || mu.parts[i - 1] > mu.parts[i]) {
      young_diagram nu = mu;
      ++nu.parts[i];
      out.push_back(std::move(nu));
    }
  }
  return out;
}

/// Writes mu + e_i - e_j into `out`; false if the result is not weakly
/// decreasing with nonnegative parts (i.e. leaves the diagram lattice).
inline bool try_shift(std::span<const part_t> mu, std::size_t i, std::size_t j,
                      std::span<part_t> out) {
  std::copy(mu.begin(), mu.end(), out.begin());
  ++out[i];
  --out[j];
  return weakly_decreasing(out);
}

/// All lattice diagrams nu with nu = mu + e_i - e_j for some i != j, sorted
/// reverse-lexicographically. The relation is symmetric.
inline std::vector<young_diagram> shift_neighbors(const young_diagram& mu) {
  const std::size_t d = mu.parts.size();
  std::vector<young_diagram> out;
  std::vector<part_t> buf(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i == j) continue;
      if (try_shift(mu.parts, i, j, buf)) {
        out.push_back(young_diagram{buf});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const young_diagram& a, const young_diagram& b) {
    return compare_rows(a.parts, b.parts) == std::strong_ordering::greater;
  });
  return out;
}

}  // namespace estfid
