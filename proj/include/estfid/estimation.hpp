#pragma once

// The estimation fidelity matrix over the Young lattice and its derived
// quantities: the extremal fidelity f_est(n, d), the scaled deficit
// h_nd = n^2 (1 - f_est), Rayleigh quotients of arbitrary test vectors, and
// the polynomial test vector v_mu built from x_d * prod(x_i - x_{i+1}).

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "estfid/errors.hpp"
#include "estfid/sparse_matrix.hpp"
#include "estfid/spectral.hpp"
#include "estfid/young_lattice.hpp"

namespace estfid {

/// Fidelity matrix: entry (mu, nu) equals an integer numerator over d^2.
/// Diagonal numerators are the add-box counts #(mu + box); off-diagonal
/// numerators are 1 exactly when nu = mu + e_i - e_j for some i != j.
struct estimation_matrix {
  lattice_index lattice;
  sparse_sym_matrix matrix;                 // numerators / d^2 as doubles
  std::vector<std::int32_t> numerators;     // aligned with matrix.entries()
};

enum class assembly_route {
  case_formula,        // diagonal add-box count, off-diagonal 1 per shift pair
  intersection_count,  // entry = #[(mu + box) intersect (nu + box)]
};

/// Assembles the fidelity matrix for the (n, d) lattice. Both routes must
/// produce identical matrices; the intersection route recomputes every entry
/// from the add-box sets and exists as a cross-check.
inline estimation_matrix build_m_est(int n, int d,
                                     std::size_t max_diagrams = default_max_diagrams,
                                     assembly_route route = assembly_route::case_formula) {
  if (n < 1 || d < 2) throw dimension_error("build_m_est: need n >= 1, d >= 2");
  lattice_index lattice(n, d, max_diagrams);
  const std::size_t count = lattice.size();
  const std::size_t du = static_cast<std::size_t>(d);
  const double denom = static_cast<double>(d) * static_cast<double>(d);

  std::vector<coo_entry> entries;
  std::vector<std::int32_t> numerators;
  entries.reserve(count * (1 + du * (du - 1) / 2));
  numerators.reserve(entries.capacity());

  std::vector<part_t> shifted(du);
  auto intersection_numerator = [&](std::span<const part_t> mu, std::span<const part_t> nu) {
    // #[(mu + box) intersect (nu + box)] computed directly from both add-box sets.
    std::int32_t overlap = 0;
    std::vector<part_t> a(mu.begin(), mu.end()), b(nu.begin(), nu.end());
    for (std::size_t i = 0; i < du; ++i) {
      if (i > 0 && mu[i - 1] <= mu[i]) continue;
      ++a[i];
      for (std::size_t j = 0; j < du; ++j) {
        if (j > 0 && nu[j - 1] <= nu[j]) continue;
        ++b[j];
        if (std::equal(a.begin(), a.end(), b.begin())) ++overlap;
        --b[j];
      }
      --a[i];
    }
    return overlap;
  };

  for (std::size_t k = 0; k < count; ++k) {
    auto mu = lattice.diagram(k);
    std::int32_t diag_num = route == assembly_route::case_formula
                                ? add_box_count(mu)
                                : intersection_numerator(mu, mu);
    entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k),
                       static_cast<double>(diag_num) / denom});
    numerators.push_back(diag_num);
    for (std::size_t i = 0; i < du; ++i) {
      for (std::size_t j = 0; j < du; ++j) {
        if (i == j) continue;
        if (!try_shift(mu, i, j, shifted)) continue;
        auto pos = lattice.position(shifted);
        if (!pos || *pos <= k) continue;  // store the upper triangle once
        std::int32_t off_num = route == assembly_route::case_formula
                                   ? 1
                                   : intersection_numerator(mu, lattice.diagram(*pos));
        entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(*pos),
                           static_cast<double>(off_num) / denom});
        numerators.push_back(off_num);
      }
    }
  }

  // sparse_sym_matrix sorts its entries; ours are already emitted sorted by
  // (row, col) because positions of shift targets are scanned per row, but we
  // keep the numerator list aligned by re-sorting the same way.
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return entries[a].row != entries[b].row ? entries[a].row < entries[b].row
                                            : entries[a].col < entries[b].col;
  });
  std::vector<coo_entry> sorted_entries(entries.size());
  std::vector<std::int32_t> sorted_numerators(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    sorted_entries[i] = entries[order[i]];
    sorted_numerators[i] = numerators[order[i]];
  }

  return estimation_matrix{std::move(lattice),
                           sparse_sym_matrix(count, std::move(sorted_entries)),
                           std::move(sorted_numerators)};
}

struct fidelity_record {
  int n = 0;
  int d = 0;
  std::size_t dim = 0;
  double f_est = 0.0;  // largest eigenvalue of the fidelity matrix, in [0, 1]
  double h_nd = 0.0;   // n^2 (1 - f_est)
  double residual = 0.0;
};

/// Largest eigenvalue of the fidelity matrix and the scaled deficit h_nd.
inline fidelity_record fidelity(int n, int d, double tol = default_eig_tol,
                                std::size_t max_diagrams = default_max_diagrams,
                                std::size_t max_iterations = default_max_lanczos_iterations) {
  auto est = build_m_est(n, d, max_diagrams);
  auto eig = extremal_eig(est.matrix, extremal_side::largest, tol, max_iterations);
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  return fidelity_record{n, d, est.lattice.size(), eig.value, nn * (1.0 - eig.value),
                         eig.residual};
}

/// Rayleigh quotient v^T M v / v^T v of a test vector against the fidelity
/// matrix (normalization applied internally).
inline double variational_fidelity(const estimation_matrix& est, std::span<const double> v) {
  if (v.size() != est.matrix.dim()) {
    throw dimension_error("variational_fidelity: vector length does not match lattice size");
  }
  double vv = detail::dot(v, v);
  if (!(vv > 0.0)) throw dimension_error("variational_fidelity: zero test vector");
  return est.matrix.quadratic_form(v) / vv;
}

inline double variational_fidelity(int n, int d, std::span<const double> v,
                                   std::size_t max_diagrams = default_max_diagrams) {
  return variational_fidelity(build_m_est(n, d, max_diagrams), v);
}

/// Polynomial test vector v_mu proportional to u(mu / n) for
/// u(x) = x_d * prod_{i<d} (x_i - x_{i+1}), returned with unit norm.
/// The component at mu vanishes exactly when two consecutive rows are equal or
/// the last row is empty; the whole vector vanishes iff the lattice contains
/// no strictly decreasing diagram with a nonempty last row, i.e. when
/// n < d(d+1)/2 — reported as a typed error.
inline std::vector<double> kahn_test_vector(const lattice_index& lattice) {
  const std::size_t count = lattice.size();
  const int d = lattice.d();
  std::vector<double> v(count, 0.0);
  double norm_sq = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    auto mu = lattice.diagram(k);
    // Integer product mu_d * prod(mu_i - mu_{i+1}); the 1/n^d scale cancels in
    // the normalization.
    double p = static_cast<double>(mu[static_cast<std::size_t>(d) - 1]);
    for (int i = 0; i + 1 < d; ++i) {
      p *= static_cast<double>(mu[static_cast<std::size_t>(i)] -
                               mu[static_cast<std::size_t>(i) + 1]);
    }
    v[k] = p;
    norm_sq += p * p;
  }
  if (!(norm_sq > 0.0)) {
    throw zero_test_vector_error(
        "kahn_test_vector: test vector vanishes identically on the (n=" +
        std::to_string(lattice.n()) + ", d=" + std::to_string(d) +
        ") lattice; it is nonzero only when n >= d(d+1)/2");
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& x : v) x *= inv;
  return v;
}

inline std::vector<double> kahn_test_vector(int n, int d,
                                            std::size_t max_diagrams = default_max_diagrams) {
  return kahn_test_vector(lattice_index(n, d, max_diagrams));
}

}  // namespace estfid
