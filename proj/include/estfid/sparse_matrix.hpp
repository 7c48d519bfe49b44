#pragma once

// Symmetric sparse matrix: upper-triangle coordinate entries kept as the
// canonical representation, with a compiled CSR form (both triangles) used by
// matvec and quadratic forms.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "estfid/errors.hpp"

namespace estfid {

struct coo_entry {
  std::uint32_t row;
  std::uint32_t col;  // row <= col (upper triangle)
  double value;
};

class sparse_sym_matrix {
 public:
  sparse_sym_matrix() = default;

  /// Takes the upper-triangle entry list; validates indices, sorts by (row, col)
  /// and rejects duplicates, then compiles the two-triangle CSR form.
  sparse_sym_matrix(std::size_t dim, std::vector<coo_entry> upper) : dim_(dim), upper_(std::move(upper)) {
    for (const auto& e : upper_) {
      if (e.col >= dim_ || e.row > e.col) {
        throw dimension_error("sparse_sym_matrix: entry (" + std::to_string(e.row) + "," +
                              std::to_string(e.col) + ") outside upper triangle of dim " +
                              std::to_string(dim_));
      }
    }
    std::sort(upper_.begin(), upper_.end(), [](const coo_entry& a, const coo_entry& b) {
      return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    for (std::size_t k = 0; k + 1 < upper_.size(); ++k) {
      if (upper_[k].row == upper_[k + 1].row && upper_[k].col == upper_[k + 1].col) {
        throw dimension_error("sparse_sym_matrix: duplicate entry (" +
                              std::to_string(upper_[k].row) + "," +
                              std::to_string(upper_[k].col) + ")");
      }
    }
    build_csr();
  }

  static sparse_sym_matrix identity(std::size_t dim) {
    std::vector<coo_entry> diag(dim);
    for (std::size_t i = 0; i < dim; ++i) {
      diag[i] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i), 1.0};
    }
    return sparse_sym_matrix(dim, std::move(diag));
  }

  std::size_t dim() const noexcept { return dim_; }
  const std::vector<coo_entry>& entries() const noexcept { return upper_; }
  std::size_t nnz_upper() const noexcept { return upper_.size(); }

  /// y = A x using both triangles.
  void matvec(std::span<const double> x, std::span<double> y) const {
    if (x.size() != dim_ || y.size() != dim_) {
      throw dimension_error("sparse_sym_matrix::matvec: operand size mismatch");
    }
    for (std::size_t r = 0; r < dim_; ++r) {
      double acc = 0.0;
      for (std::uint32_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
        acc += vals_[k] * x[col_idx_[k]];
      }
      y[r] = acc;
    }
  }

  std::vector<double> matvec(std::span<const double> x) const {
    std::vector<double> y(dim_);
    matvec(x, y);
    return y;
  }

  /// x^T A x accumulated in a fixed deterministic order over stored entries.
  double quadratic_form(std::span<const double> x) const {
    if (x.size() != dim_) {
      throw dimension_error("sparse_sym_matrix::quadratic_form: operand size mismatch");
    }
    double acc = 0.0;
    for (const auto& e : upper_) {
      if (e.row == e.col) {
        acc += e.value * x[e.row] * x[e.row];
      } else {
        acc += 2.0 * e.value * x[e.row] * x[e.col];
      }
    }
    return acc;
  }

  /// p^T A q accumulated in the same deterministic entry order as the
  /// quadratic form.
  double bilinear_form(std::span<const double> p, std::span<const double> q) const {
    if (p.size() != dim_ || q.size() != dim_) {
      throw dimension_error("sparse_sym_matrix::bilinear_form: operand size mismatch");
    }
    double acc = 0.0;
    for (const auto& e : upper_) {
      if (e.row == e.col) {
        acc += e.value * p[e.row] * q[e.row];
      } else {
        acc += e.value * (p[e.row] * q[e.col] + p[e.col] * q[e.row]);
      }
    }
    return acc;
  }

  /// Max absolute row sum (a cheap norm used for residual/breakdown scales).
  double infinity_norm() const {
    std::vector<double> row_abs(dim_, 0.0);
    for (const auto& e : upper_) {
      row_abs[e.row] += std::abs(e.value);
      if (e.row != e.col) row_abs[e.col] += std::abs(e.value);
    }
    double best = 0.0;
    for (double v : row_abs) best = std::max(best, v);
    return best;
  }

 private:
  void build_csr() {
    std::vector<std::uint32_t> counts(dim_ + 1, 0);
    for (const auto& e : upper_) {
      ++counts[e.row + 1];
      if (e.row != e.col) ++counts[e.col + 1];
    }
    row_ptr_.assign(dim_ + 1, 0);
    for (std::size_t r = 0; r < dim_; ++r) row_ptr_[r + 1] = row_ptr_[r] + counts[r + 1];
    col_idx_.assign(row_ptr_[dim_], 0);
    vals_.assign(row_ptr_[dim_], 0.0);
    std::vector<std::uint32_t> cursor(row_ptr_.begin(), row_ptr_.end() - 1);
    for (const auto& e : upper_) {
      col_idx_[cursor[e.row]] = e.col;
      vals_[cursor[e.row]++] = e.value;
      if (e.row != e.col) {
        col_idx_[cursor[e.col]] = e.row;
        vals_[cursor[e.col]++] = e.value;
      }
    }
  }

  std::size_t dim_ = 0;
  std::vector<coo_entry> upper_;
  std::vector<std::uint32_t> row_ptr_;
  std::vector<std::uint32_t> col_idx_;
  std::vector<double> vals_;
};

/// alpha*A + beta*B + gamma*I over the merged sparsity pattern; exact zeros are
/// kept (callers that care about structural cancellation check values, not
/// patterns).
inline sparse_sym_matrix lin_comb(double alpha, const sparse_sym_matrix& a, double beta,
                                  const sparse_sym_matrix& b, double gamma_identity = 0.0) {
  if (a.dim() != b.dim()) throw dimension_error("lin_comb: dimension mismatch");
  const auto& ea = a.entries();
  const auto& eb = b.entries();
  std::vector<coo_entry> out;
  out.reserve(ea.size() + eb.size() + a.dim());
  std::size_t ia = 0, ib = 0;
  std::uint32_t next_diag = 0;  // inject gamma*I at untouched diagonal slots
  auto key = [](const coo_entry& e) {
    return (static_cast<std::uint64_t>(e.row) << 32) | e.col;
  };
  auto flush_diag_before = [&](std::uint64_t k) {
    if (gamma_identity == 0.0) return;
    while (next_diag < a.dim()) {
      std::uint64_t dk = (static_cast<std::uint64_t>(next_diag) << 32) | next_diag;
      if (dk >= k) break;
      out.push_back({next_diag, next_diag, gamma_identity});
      ++next_diag;
    }
  };
  while (ia < ea.size() || ib < eb.size()) {
    std::uint64_t ka = ia < ea.size() ? key(ea[ia]) : ~0ULL;
    std::uint64_t kb = ib < eb.size() ? key(eb[ib]) : ~0ULL;
    std::uint64_t k = std::min(ka, kb);
    flush_diag_before(k);
    coo_entry e{static_cast<std::uint32_t>(k >> 32), static_cast<std::uint32_t>(k & 0xffffffffu), 0.0};
    if (ka == k) e.value += alpha * ea[ia++].value;
    if (kb == k) e.value += beta * eb[ib++].value;
    if (gamma_identity != 0.0 && e.row == e.col && e.row == next_diag) {
      e.value += gamma_identity;
      ++next_diag;
    }
    out.push_back(e);
  }
  flush_diag_before(~0ULL);
  return sparse_sym_matrix(a.dim(), std::move(out));
}

}  // namespace estfid
