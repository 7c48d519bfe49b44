#pragma once

// Simplicial meshes over the boundary graph (segments for d=2, equilateral
// triangles for d=3), P1 finite-element stiffness/mass assembly both from
// first principles (hat-function gradients per simplex) and from the known
// closed forms in terms of the graph Laplacian, and the resulting upper bound
// on the continuum Dirichlet eigenvalue via the (K, M) pencil.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "estfid/dirichlet_graph.hpp"
#include "estfid/errors.hpp"
#include "estfid/sparse_matrix.hpp"
#include "estfid/spectral.hpp"

namespace estfid {

/// Vertices embedded isometrically into R^{d-1}; the first num_interior
/// vertices are interior (same order as the lattice), the rest are boundary.
struct triangulation {
  int n = 0;
  int d = 0;
  std::size_t num_interior = 0;
  std::vector<double> coords;              // (d-1) doubles per vertex
  std::vector<std::uint32_t> simplices;    // d indices per simplex

  std::size_t space_dim() const { return static_cast<std::size_t>(d) - 1; }
  std::size_t num_vertices() const { return coords.size() / space_dim(); }
  std::size_t num_simplices() const { return simplices.size() / d; }
  bool is_interior(std::size_t v) const { return v < num_interior; }

  std::span<const double> vertex(std::size_t v) const {
    return std::span<const double>(coords.data() + v * space_dim(), space_dim());
  }
  std::span<const std::uint32_t> simplex(std::size_t s) const {
    return std::span<const std::uint32_t>(simplices.data() + s * d,
                                          static_cast<std::size_t>(d));
  }
};

/// Deterministic orthonormal basis of the hyperplane {sum x_i = const}:
/// b_k = (1,...,1,-k,0,...,0)/sqrt(k(k+1)) with k leading ones (Gram-Schmidt
/// applied to the shift directions e_1-e_2, e_2-e_3, ...).
inline std::vector<double> embed_point(std::span<const part_t> scaled, int n) {
  const std::size_t d = scaled.size();
  std::vector<double> xi(d - 1);
  double prefix = 0.0;
  for (std::size_t k = 1; k < d; ++k) {
    prefix += static_cast<double>(scaled[k - 1]);
    double dk = static_cast<double>(k);
    xi[k - 1] = (prefix - dk * static_cast<double>(scaled[k])) /
                (std::sqrt(dk * (dk + 1.0)) * static_cast<double>(n));
  }
  return xi;
}

/// Mesh whose cells are the d-cliques of the boundary graph.
inline triangulation build_triangulation(const boundary_graph& g) {
  if (g.d != 2 && g.d != 3) {
    throw unsupported_dimension_error(
        "build_triangulation: regular-simplex meshes of this lattice exist only for "
        "d=2 (segments) and d=3 (equilateral triangles); requested d=" +
        std::to_string(g.d));
  }
  triangulation t;
  t.n = g.n;
  t.d = g.d;
  t.num_interior = g.num_interior();
  const std::size_t total = g.num_vertices();
  t.coords.reserve(total * t.space_dim());
  for (std::size_t v = 0; v < total; ++v) {
    auto xi = embed_point(g.point(v), g.n);
    t.coords.insert(t.coords.end(), xi.begin(), xi.end());
  }

  if (g.d == 2) {
    for (const auto& [a, b] : g.edges) {
      t.simplices.push_back(a);
      t.simplices.push_back(b);
    }
    return t;
  }

  // d = 3: enumerate 3-cliques from sorted adjacency lists, smallest index first.
  std::vector<std::vector<std::uint32_t>> adj(total);
  for (const auto& [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  auto has_edge = [&](std::uint32_t a, std::uint32_t b) {
    return std::binary_search(adj[a].begin(), adj[a].end(), b);
  };
  for (std::uint32_t a = 0; a < total; ++a) {
    const auto& na = adj[a];
    for (std::size_t i = 0; i < na.size(); ++i) {
      if (na[i] <= a) continue;
      for (std::size_t j = i + 1; j < na.size(); ++j) {
        if (has_edge(na[i], na[j])) {
          t.simplices.push_back(a);
          t.simplices.push_back(na[i]);
          t.simplices.push_back(na[j]);
        }
      }
    }
  }
  return t;
}

inline triangulation build_triangulation(int n, int d,
                                         std::size_t max_diagrams = default_max_diagrams) {
  if (d != 2 && d != 3) {
    throw unsupported_dimension_error(
        "build_triangulation: supported only for d in {2,3}; requested d=" +
        std::to_string(d));
  }
  if (n < 2) throw dimension_error("build_triangulation: need n >= 2");
  return build_triangulation(build_boundary_graph(n, d, max_diagrams));
}

struct fem_pair {
  sparse_sym_matrix stiffness;  // K: Dirichlet energy, interior rows/cols only
  sparse_sym_matrix mass;       // M: L2 inner product, interior rows/cols only
};

/// P1 assembly from first principles: per simplex, hat-function gradients from
/// the affine coefficient system, exact volume and exact mass integrals
/// vol*(1+delta_ij)/((k+1)(k+2)); rows/columns of boundary vertices dropped.
inline fem_pair assemble_generic(const triangulation& t) {
  const std::size_t k = t.space_dim();       // ambient dimension of the mesh
  const std::size_t nv = static_cast<std::size_t>(t.d);  // vertices per simplex
  const std::size_t m = t.num_interior;
  double factorial = 1.0;
  for (std::size_t i = 2; i <= k; ++i) factorial *= static_cast<double>(i);

  std::vector<std::pair<std::uint64_t, double>> k_acc, m_acc;
  Eigen::MatrixXd w(nv, nv), grads;
  for (std::size_t s = 0; s < t.num_simplices(); ++s) {
    auto ids = t.simplex(s);
    double longest_sq = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
      auto vi = t.vertex(ids[i]);
      for (std::size_t c = 0; c < k; ++c) w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = vi[c];
      w(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = 1.0;
      for (std::size_t j = i + 1; j < nv; ++j) {
        auto vj = t.vertex(ids[j]);
        double ls = 0.0;
        for (std::size_t c = 0; c < k; ++c) ls += (vi[c] - vj[c]) * (vi[c] - vj[c]);
        longest_sq = std::max(longest_sq, ls);
      }
    }
    const double det = w.determinant();
    const double volume = std::abs(det) / factorial;
    const double degenerate_floor = 1e-12 * std::pow(std::sqrt(longest_sq), static_cast<double>(k));
    if (!(volume > degenerate_floor)) {
      throw degenerate_simplex_error("assemble_generic: simplex " + std::to_string(s) +
                                     " has (near-)zero volume " + std::to_string(volume));
    }
    // Hat coefficients: column i of W^{-1} is (a_i; b_i) with psi_i = a_i.x + b_i.
    grads = w.inverse();
    const double mass_scale = volume / (static_cast<double>(nv) * static_cast<double>(nv + 1));
    for (std::size_t i = 0; i < nv; ++i) {
      if (!t.is_interior(ids[i])) continue;
      for (std::size_t j = i; j < nv; ++j) {
        if (!t.is_interior(ids[j])) continue;
        double kij = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
          kij += grads(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i)) *
                 grads(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
        }
        kij *= volume;
        double mij = mass_scale * (i == j ? 2.0 : 1.0);
        std::uint32_t r = std::min(ids[i], ids[j]);
        std::uint32_t c = std::max(ids[i], ids[j]);
        std::uint64_t key = (static_cast<std::uint64_t>(r) << 32) | c;
        k_acc.emplace_back(key, kij);
        m_acc.emplace_back(key, mij);
      }
    }
  }

  auto combine = [m](std::vector<std::pair<std::uint64_t, double>>& acc) {
    // stable sort keeps per-key contributions in simplex order, so the
    // floating-point accumulation order is deterministic
    std::stable_sort(acc.begin(), acc.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<coo_entry> entries;
    entries.reserve(acc.size());
    for (std::size_t i = 0; i < acc.size();) {
      std::uint64_t key = acc[i].first;
      double sum = 0.0;
      for (; i < acc.size() && acc[i].first == key; ++i) sum += acc[i].second;
      entries.push_back({static_cast<std::uint32_t>(key >> 32),
                         static_cast<std::uint32_t>(key & 0xffffffffu), sum});
    }
    return sparse_sym_matrix(m, std::move(entries));
  };
  return fem_pair{combine(k_acc), combine(m_acc)};
}

namespace detail {

inline sparse_sym_matrix scaled(double factor, const sparse_sym_matrix& a) {
  std::vector<coo_entry> entries = a.entries();
  for (auto& e : entries) e.value *= factor;
  return sparse_sym_matrix(a.dim(), std::move(entries));
}

}  // namespace detail

/// Closed forms in terms of the lattice Laplacian L:
///   d=2: K = (n/sqrt(2)) L,      M = (sqrt(2)/n) (I - L/6)
///   d=3: K = (1/sqrt(3)) L,      M = (sqrt(3)/n^2) (I - L/12)
inline fem_pair closed_form_pair(int n, int d,
                                 std::size_t max_diagrams = default_max_diagrams) {
  if (d != 2 && d != 3) {
    throw unsupported_dimension_error("closed_form_pair: supported only for d in {2,3}");
  }
  auto lap = dirichlet_laplacian(n, d, max_diagrams);
  const double nd = static_cast<double>(n);
  if (d == 2) {
    const double rt2 = std::numbers::sqrt2;
    return fem_pair{detail::scaled(nd / rt2, lap.matrix),
                    lin_comb(-(rt2 / nd) / 6.0, lap.matrix, 0.0, lap.matrix, rt2 / nd)};
  }
  const double rt3 = std::numbers::sqrt3;
  return fem_pair{detail::scaled(1.0 / rt3, lap.matrix),
                  lin_comb(-(rt3 / (nd * nd)) / 12.0, lap.matrix, 0.0, lap.matrix,
                           rt3 / (nd * nd))};
}

/// Smallest eigenvalue of the FEM pencil K u = lambda M u: an upper bound on
/// the Dirichlet eigenvalue of the meshed region. Computed from the generic
/// assembly and cross-checked against the equivalent graph-eigenvalue ratio
///   d=2: (n^2/2) lambda / (1 - lambda/6),   d=3: (n^2/3) lambda / (1 - lambda/12)
/// with lambda the smallest Laplacian eigenvalue; the two paths must agree.
inline double fem_min_eig(int n, int d, double tol = default_eig_tol,
                          std::size_t max_diagrams = default_max_diagrams) {
  if (d != 2 && d != 3) {
    throw unsupported_dimension_error("fem_min_eig: supported only for d in {2,3}");
  }
  auto graph = build_boundary_graph(n, d, max_diagrams);
  auto mesh = build_triangulation(graph);
  auto pair = assemble_generic(mesh);
  auto pencil = pencil_min_eig(pair.stiffness, pair.mass, tol);

  auto lap = dirichlet_laplacian(graph);
  double lambda = extremal_eig(lap.matrix, extremal_side::smallest, tol).value;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  double ratio = d == 2 ? (nn / 2.0) * lambda / (1.0 - lambda / 6.0)
                        : (nn / 3.0) * lambda / (1.0 - lambda / 12.0);
  double rel = std::abs(pencil.value - ratio) / std::max(1.0, std::abs(ratio));
  if (rel > 1e-6) {
    throw convergence_error("fem_min_eig: pencil value " + std::to_string(pencil.value) +
                                " and graph-ratio value " + std::to_string(ratio) +
                                " disagree",
                            rel);
  }
  return pencil.value;
}

/// Known continuum Dirichlet eigenvalues of the limiting regions: 2 pi^2 for
/// the d=2 segment; for d=3 the hemi-equilateral triangle value
/// 28 pi^2 / (27 r^2) with r = 1/(3 sqrt(2)), which simplifies to 56 pi^2 / 3.
inline double continuous_reference(int d) {
  const double pi = std::numbers::pi;
  if (d == 2) return 2.0 * pi * pi;
  if (d == 3) {
    const double r = 1.0 / (3.0 * std::numbers::sqrt2);
    return 28.0 * pi * pi / (27.0 * r * r);
  }
  throw unsupported_dimension_error("continuous_reference: supported only for d in {2,3}");
}

/// Plain-text mesh export: header "d n V S", then V vertex coordinate lines,
/// then S simplex index lines.
inline void export_mesh(const triangulation& t, std::ostream& os) {
  os << t.d << ' ' << t.n << ' ' << t.num_vertices() << ' ' << t.num_simplices() << '\n';
  char buf[64];
  for (std::size_t v = 0; v < t.num_vertices(); ++v) {
    auto p = t.vertex(v);
    for (std::size_t c = 0; c < p.size(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[c]);
      os << (c ? " " : "") << buf;
    }
    os << '\n';
  }
  for (std::size_t s = 0; s < t.num_simplices(); ++s) {
    auto ids = t.simplex(s);
    for (std::size_t c = 0; c < ids.size(); ++c) os << (c ? " " : "") << ids[c];
    os << '\n';
  }
}

}  // namespace estfid
