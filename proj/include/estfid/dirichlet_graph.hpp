#pragma once

// Lattice graph on scaled diagrams plus a one-step halo: interior vertices are
// the diagrams mu (coordinates mu/n), boundary vertices are the shift targets
// mu + (e_i - e_j) that leave the diagram set, and edges connect any two
// vertices differing by one shift. The interior-restricted Laplacian with
// full-graph degrees on the diagonal discretizes a Dirichlet eigenproblem;
// this module also verifies the operator domination
//   d^2 (I - M_est) - L  is positive semidefinite,
// which is entrywise-exact off the diagonal.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "estfid/errors.hpp"
#include "estfid/estimation.hpp"
#include "estfid/sparse_matrix.hpp"
#include "estfid/spectral.hpp"
#include "estfid/young_lattice.hpp"

namespace estfid {

/// Vertices are stored as integer vectors (coordinates scaled by n); interior
/// vertices share the lattice ordering, boundary vertices follow in
/// reverse-lexicographic order. Edges use unified indices, interior first.
struct boundary_graph {
  int n = 0;
  int d = 0;
  lattice_index interior;
  std::vector<part_t> boundary_flat;  // halo points, rows of length d
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;  // first < second

  std::size_t num_interior() const { return interior.size(); }
  std::size_t num_boundary() const { return boundary_flat.size() / d; }
  std::size_t num_vertices() const { return num_interior() + num_boundary(); }
  bool is_interior(std::size_t v) const { return v < num_interior(); }

  /// Integer coordinates (scaled by n) of any vertex.
  std::span<const part_t> point(std::size_t v) const {
    if (v < num_interior()) return interior.diagram(v);
    std::size_t b = v - num_interior();
    return std::span<const part_t>(boundary_flat.data() + b * d, static_cast<std::size_t>(d));
  }

  /// Edge list dump: one edge per line, each endpoint as comma-separated
  /// integer coordinates.
  void dump_edges(std::ostream& os) const {
    for (const auto& [a, b] : edges) {
      auto write = [&](std::span<const part_t> p) {
        for (int i = 0; i < d; ++i) {
          if (i) os << ',';
          os << p[static_cast<std::size_t>(i)];
        }
      };
      write(point(a));
      os << ' ';
      write(point(b));
      os << '\n';
    }
  }
};

inline boundary_graph build_boundary_graph(int n, int d,
                                           std::size_t max_diagrams = default_max_diagrams) {
  if (n < 1 || d < 2) throw dimension_error("build_boundary_graph: need n >= 1, d >= 2");
  lattice_index interior(n, d, max_diagrams);
  const std::size_t m = interior.size();
  const std::size_t du = static_cast<std::size_t>(d);

  // Halo: every shift target of an interior point that is not itself a
  // diagram, i.e. the ordering breaks or the last row goes negative.
  auto is_diagram = [du](std::span<const part_t> p) {
    return weakly_decreasing(p) && p[du - 1] >= 0;
  };
  std::vector<std::vector<part_t>> halo;
  std::vector<part_t> shifted(du);
  for (std::size_t k = 0; k < m; ++k) {
    auto mu = interior.diagram(k);
    for (std::size_t i = 0; i < du; ++i) {
      for (std::size_t j = 0; j < du; ++j) {
        if (i == j) continue;
        std::copy(mu.begin(), mu.end(), shifted.begin());
        ++shifted[i];
        --shifted[j];
        if (!is_diagram(shifted)) {
          halo.emplace_back(shifted.begin(), shifted.end());
        }
      }
    }
  }
  std::sort(halo.begin(), halo.end(), [](const auto& a, const auto& b) {
    return compare_rows(std::span<const part_t>(a), std::span<const part_t>(b)) ==
           std::strong_ordering::greater;
  });
  halo.erase(std::unique(halo.begin(), halo.end()), halo.end());

  boundary_graph g{n, d, std::move(interior), {}, {}};
  g.boundary_flat.reserve(halo.size() * du);
  for (const auto& p : halo) g.boundary_flat.insert(g.boundary_flat.end(), p.begin(), p.end());

  auto boundary_position = [&](std::span<const part_t> p) -> std::optional<std::size_t> {
    std::size_t lo = 0, hi = g.num_boundary();
    while (lo < hi) {
      std::size_t mid = lo + (hi - lo) / 2;
      auto row = std::span<const part_t>(g.boundary_flat.data() + mid * du, du);
      auto cmp = compare_rows(row, p);
      if (cmp == std::strong_ordering::equal) return mid;
      if (cmp == std::strong_ordering::greater) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return std::nullopt;
  };
  auto unified_position = [&](std::span<const part_t> p) -> std::optional<std::size_t> {
    if (is_diagram(p)) {
      if (auto pos = g.interior.position(p)) return pos;
      return std::nullopt;  // a valid diagram of a different box count cannot occur here
    }
    if (auto pos = boundary_position(p)) return *pos + g.num_interior();
    return std::nullopt;
  };

  // Edges: scan every vertex's shifts; emit each edge from its lower endpoint.
  const std::size_t total = g.num_vertices();
  for (std::size_t v = 0; v < total; ++v) {
    auto p = g.point(v);
    for (std::size_t i = 0; i < du; ++i) {
      for (std::size_t j = 0; j < du; ++j) {
        if (i == j) continue;
        std::copy(p.begin(), p.end(), shifted.begin());
        ++shifted[i];
        --shifted[j];
        auto q = unified_position(shifted);
        if (q && *q > v) {
          g.edges.emplace_back(static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(*q));
        }
      }
    }
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

/// Interior-restricted Laplacian: diagonal holds full-graph degrees (boundary
/// neighbors included), off-diagonal -1 for interior-interior edges.
struct dirichlet_laplacian_matrix {
  sparse_sym_matrix matrix;
  std::vector<std::uint32_t> degrees;  // degree of each interior vertex in the full graph
};

inline dirichlet_laplacian_matrix dirichlet_laplacian(const boundary_graph& g) {
  const std::size_t m = g.num_interior();
  std::vector<std::uint32_t> deg(g.num_vertices(), 0);
  for (const auto& [a, b] : g.edges) {
    ++deg[a];
    ++deg[b];
  }
  std::vector<coo_entry> entries;
  entries.reserve(m + g.edges.size());
  for (std::size_t k = 0; k < m; ++k) {
    entries.push_back({static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k),
                       static_cast<double>(deg[k])});
  }
  for (const auto& [a, b] : g.edges) {
    if (b < m) entries.push_back({a, b, -1.0});  // a < b, so both interior
  }
  deg.resize(m);
  return dirichlet_laplacian_matrix{sparse_sym_matrix(m, std::move(entries)), std::move(deg)};
}

inline dirichlet_laplacian_matrix dirichlet_laplacian(int n, int d,
                                                      std::size_t max_diagrams =
                                                          default_max_diagrams) {
  return dirichlet_laplacian(build_boundary_graph(n, d, max_diagrams));
}

/// Smallest eigenvalue of the interior-restricted Laplacian.
inline double lambda_min_graph(int n, int d, double tol = default_eig_tol,
                               std::size_t max_diagrams = default_max_diagrams,
                               std::size_t max_iterations = default_max_lanczos_iterations) {
  auto lap = dirichlet_laplacian(n, d, max_diagrams);
  return extremal_eig(lap.matrix, extremal_side::smallest, tol, max_iterations).value;
}

struct domination_report {
  bool passed = false;
  // (a) off-diagonal structure: for every interior pair, the Laplacian has -1
  // exactly where the fidelity matrix has numerator 1 (a shift pair), and the
  // independent intersection count agrees. Counts of mismatches recorded.
  std::size_t offdiag_mismatches = 0;
  std::optional<std::pair<young_diagram, young_diagram>> first_offdiag_mismatch;
  // (b) diagonal inequality L_pp <= d^2 - #(mu_p + box), exact in integers.
  std::size_t diagonal_violations = 0;
  std::optional<young_diagram> first_diagonal_violation;
  // (c) global PSD of d^2 (I - M_est) - L, dense, skipped above the cap.
  bool psd_checked = false;
  bool psd_passed = false;
  double min_eigenvalue = 0.0;
  std::vector<double> psd_witness;
  std::string summary;
};

/// Verifies the operator domination d^2 (I - M_est) >= L on the (n, d) lattice.
inline domination_report domination_check(int n, int d, double tol = default_eig_tol,
                                          std::size_t dense_cap = default_dense_cap,
                                          std::size_t max_diagrams = default_max_diagrams) {
  auto est = build_m_est(n, d, max_diagrams);
  auto g = build_boundary_graph(n, d, max_diagrams);
  auto lap = dirichlet_laplacian(g);
  const std::size_t m = est.lattice.size();
  const std::int64_t d2 = static_cast<std::int64_t>(d) * d;

  domination_report report;

  // Integer-exact entrywise comparison. Fidelity entries indexed one way, the
  // Laplacian another; walk both sorted upper-triangle lists in lockstep.
  const auto& fe = est.matrix.entries();
  const auto& le = lap.matrix.entries();
  std::size_t fi = 0, li = 0;
  auto record_offdiag = [&](std::uint32_t r, std::uint32_t c) {
    if (report.offdiag_mismatches == 0) {
      report.first_offdiag_mismatch = {est.lattice.diagram_copy(r), est.lattice.diagram_copy(c)};
    }
    ++report.offdiag_mismatches;
  };
  while (fi < fe.size() || li < le.size()) {
    std::uint64_t kf = fi < fe.size()
                           ? (static_cast<std::uint64_t>(fe[fi].row) << 32) | fe[fi].col
                           : ~0ULL;
    std::uint64_t kl = li < le.size()
                           ? (static_cast<std::uint64_t>(le[li].row) << 32) | le[li].col
                           : ~0ULL;
    std::uint64_t key = std::min(kf, kl);
    std::uint32_t r = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t c = static_cast<std::uint32_t>(key & 0xffffffffu);
    std::int64_t numer = kf == key ? est.numerators[fi] : 0;   // d^2 * M entry
    double lval = kl == key ? le[li].value : 0.0;              // L entry
    if (r == c) {
      // (b) diagonal: L_pp = deg(p) must not exceed d^2 - #(mu_p + box).
      auto mu = est.lattice.diagram(r);
      std::int64_t slack = d2 - numer - static_cast<std::int64_t>(lval);
      std::int64_t indep = add_box_count(mu);
      if (numer != indep || slack < 0) {
        if (report.diagonal_violations == 0) {
          report.first_diagonal_violation = est.lattice.diagram_copy(r);
        }
        ++report.diagonal_violations;
      }
    } else {
      // (a) off-diagonal: -L entry must equal the shift indicator, which must
      // equal the independent intersection count of the two add-box sets.
      auto mu = est.lattice.diagram(r);
      auto nu = est.lattice.diagram(c);
      std::int64_t indep = 0;  // #[(mu + box) intersect (nu + box)]
      {
        auto boxes_mu = add_box_set(est.lattice.diagram_copy(r));
        auto boxes_nu = add_box_set(est.lattice.diagram_copy(c));
        for (const auto& a : boxes_mu) {
          for (const auto& b : boxes_nu) {
            if (a == b) ++indep;
          }
        }
      }
      (void)mu;
      (void)nu;
      if (numer != indep || lval != -static_cast<double>(numer)) record_offdiag(r, c);
    }
    if (kf == key) ++fi;
    if (kl == key) ++li;
  }

  // (c) dense PSD of the integer-exact difference d^2 I - d^2 M - L.
  if (m <= dense_cap) {
    std::vector<coo_entry> diff;
    diff.reserve(fe.size() + le.size());
    std::size_t ai = 0, bi = 0;
    while (ai < fe.size() || bi < le.size()) {
      std::uint64_t ka = ai < fe.size()
                             ? (static_cast<std::uint64_t>(fe[ai].row) << 32) | fe[ai].col
                             : ~0ULL;
      std::uint64_t kb = bi < le.size()
                             ? (static_cast<std::uint64_t>(le[bi].row) << 32) | le[bi].col
                             : ~0ULL;
      std::uint64_t key = std::min(ka, kb);
      std::uint32_t r = static_cast<std::uint32_t>(key >> 32);
      std::uint32_t c = static_cast<std::uint32_t>(key & 0xffffffffu);
      std::int64_t value = (r == c) ? d2 : 0;
      if (ka == key) value -= est.numerators[ai++];
      if (kb == key) value -= static_cast<std::int64_t>(le[bi++].value);
      diff.push_back({r, c, static_cast<double>(value)});
    }
    auto psd = psd_check(sparse_sym_matrix(m, std::move(diff)), tol, dense_cap);
    report.psd_checked = true;
    report.psd_passed = psd.positive_semidefinite;
    report.min_eigenvalue = psd.min_eigenvalue;
    report.psd_witness = std::move(psd.witness);
  }

  report.passed = report.offdiag_mismatches == 0 && report.diagonal_violations == 0 &&
                  (!report.psd_checked || report.psd_passed);
  std::ostringstream ss;
  ss << "domination n=" << n << " d=" << d << ": offdiag mismatches "
     << report.offdiag_mismatches << ", diagonal violations " << report.diagonal_violations;
  if (report.psd_checked) {
    ss << ", psd " << (report.psd_passed ? "ok" : "VIOLATED") << " (min eig "
       << report.min_eigenvalue << ")";
  } else {
    ss << ", psd skipped (dim " << m << " above dense cap)";
  }
  report.summary = ss.str();
  return report;
}

}  // namespace estfid
