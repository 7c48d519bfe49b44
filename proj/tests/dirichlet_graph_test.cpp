// Tests for the halo-padded shift graph and its interior-restricted Laplacian:
// structure on small instances, constant full-graph degree, closed-form and
// frozen smallest eigenvalues, the operator-domination report, and the
// stability of n^2 lambda_min across n.

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "estfid/dirichlet_graph.hpp"
#include "estfid/estimation.hpp"
#include "estfid/young_lattice.hpp"

namespace estfid {
namespace {

std::vector<part_t> as_vec(std::span<const part_t> p) {
  return std::vector<part_t>(p.begin(), p.end());
}

TEST(dirichlet_graph, structure_n2_d2) {
  auto g = build_boundary_graph(2, 2);
  ASSERT_EQ(g.num_interior(), 2u);
  ASSERT_EQ(g.num_boundary(), 2u);
  EXPECT_EQ(g.num_vertices(), 4u);

  EXPECT_EQ(as_vec(g.point(0)), (std::vector<part_t>{2, 0}));
  EXPECT_EQ(as_vec(g.point(1)), (std::vector<part_t>{1, 1}));
  // Halo in descending lexicographic order.
  EXPECT_EQ(as_vec(g.point(2)), (std::vector<part_t>{3, -1}));
  EXPECT_EQ(as_vec(g.point(3)), (std::vector<part_t>{0, 2}));
  EXPECT_TRUE(g.is_interior(0));
  EXPECT_TRUE(g.is_interior(1));
  EXPECT_FALSE(g.is_interior(2));
  EXPECT_FALSE(g.is_interior(3));

  // Path (3,-1) -- (2,0) -- (1,1) -- (0,2) in unified indices.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> want{{0, 1}, {0, 2}, {1, 3}};
  EXPECT_EQ(g.edges, want);
}

TEST(dirichlet_graph, structure_n4_d2) {
  auto g = build_boundary_graph(4, 2);
  ASSERT_EQ(g.num_interior(), 3u);
  ASSERT_EQ(g.num_boundary(), 2u);
  EXPECT_EQ(as_vec(g.point(3)), (std::vector<part_t>{5, -1}));
  EXPECT_EQ(as_vec(g.point(4)), (std::vector<part_t>{1, 3}));
  std::vector<std::pair<std::uint32_t, std::uint32_t>> want{{0, 1}, {0, 3}, {1, 2}, {2, 4}};
  EXPECT_EQ(g.edges, want);
}

TEST(dirichlet_graph, dump_edges_n2_d2) {
  auto g = build_boundary_graph(2, 2);
  std::ostringstream os;
  g.dump_edges(os);
  EXPECT_EQ(os.str(), "2,0 1,1\n2,0 3,-1\n1,1 0,2\n");
}

TEST(dirichlet_graph, boundary_points_are_invalid_shift_targets) {
  for (int d : {2, 3}) {
    for (int n = 1; n <= 10; ++n) {
      auto g = build_boundary_graph(n, d);
      for (std::size_t v = g.num_interior(); v < g.num_vertices(); ++v) {
        auto p = g.point(v);
        long sum = std::accumulate(p.begin(), p.end(), 0L);
        EXPECT_EQ(sum, n);  // shifts preserve the box count
        bool valid = weakly_decreasing(p);
        EXPECT_FALSE(valid) << "halo point is a diagram at n=" << n << " d=" << d;
      }
    }
  }
}

TEST(dirichlet_graph, laplacian_n2_d2_matrix) {
  auto lap = dirichlet_laplacian(2, 2);
  EXPECT_EQ(lap.degrees, (std::vector<std::uint32_t>{2, 2}));
  const auto& e = lap.matrix.entries();
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].row, 0u);
  EXPECT_EQ(e[0].col, 0u);
  EXPECT_DOUBLE_EQ(e[0].value, 2.0);
  EXPECT_EQ(e[1].row, 0u);
  EXPECT_EQ(e[1].col, 1u);
  EXPECT_DOUBLE_EQ(e[1].value, -1.0);
  EXPECT_EQ(e[2].row, 1u);
  EXPECT_EQ(e[2].col, 1u);
  EXPECT_DOUBLE_EQ(e[2].value, 2.0);
}

TEST(dirichlet_graph, laplacian_n3_d3_matrix) {
  auto lap = dirichlet_laplacian(3, 3);
  EXPECT_EQ(lap.degrees, (std::vector<std::uint32_t>{6, 6, 6}));
  // Tridiagonal [[6,-1,0],[-1,6,-1],[0,-1,6]] on (3,0,0),(2,1,0),(1,1,1).
  const auto& e = lap.matrix.entries();
  ASSERT_EQ(e.size(), 5u);
  auto expect = [&](std::size_t k, std::uint32_t r, std::uint32_t c, double v) {
    EXPECT_EQ(e[k].row, r);
    EXPECT_EQ(e[k].col, c);
    EXPECT_DOUBLE_EQ(e[k].value, v);
  };
  expect(0, 0, 0, 6.0);
  expect(1, 0, 1, -1.0);
  expect(2, 1, 1, 6.0);
  expect(3, 1, 2, -1.0);
  expect(4, 2, 2, 6.0);
}

TEST(dirichlet_graph, interior_degree_is_constant) {
  for (int d : {2, 3, 4}) {
    const std::uint32_t want = static_cast<std::uint32_t>(d * (d - 1));
    for (int n = 1; n <= 15; ++n) {
      auto lap = dirichlet_laplacian(n, d);
      for (std::uint32_t deg : lap.degrees) {
        ASSERT_EQ(deg, want) << "n=" << n << " d=" << d;
      }
    }
  }
}

TEST(dirichlet_graph, interior_edges_are_shift_pairs) {
  auto g = build_boundary_graph(6, 3);
  const std::size_t m = g.num_interior();
  std::size_t interior_edges = 0;
  for (const auto& [a, b] : g.edges) {
    if (b < m) {
      ++interior_edges;
      auto mu = g.interior.diagram_copy(a);
      auto nu = g.interior.diagram_copy(b);
      auto nbrs = shift_neighbors(mu);
      EXPECT_NE(std::find(nbrs.begin(), nbrs.end(), nu), nbrs.end())
          << "edge endpoints are not one shift apart";
    }
  }
  auto lap = dirichlet_laplacian(g);
  std::size_t offdiag = 0;
  for (const auto& en : lap.matrix.entries()) {
    if (en.row != en.col) ++offdiag;
  }
  EXPECT_EQ(offdiag, interior_edges);
}

TEST(dirichlet_graph, lambda_min_closed_forms) {
  EXPECT_NEAR(lambda_min_graph(2, 2), 1.0, 1e-10);
  EXPECT_NEAR(lambda_min_graph(4, 2), 2.0 - std::sqrt(2.0), 1e-10);
  EXPECT_NEAR(lambda_min_graph(3, 3), 6.0 - std::sqrt(2.0), 1e-10);
}

TEST(dirichlet_graph, lambda_min_frozen_anchors) {
  EXPECT_EQ(build_boundary_graph(20, 2).num_interior(), 11u);
  EXPECT_NEAR(lambda_min_graph(20, 2), 0.068148347422, 1e-9);
  EXPECT_EQ(build_boundary_graph(20, 3).num_interior(), 44u);
  EXPECT_NEAR(lambda_min_graph(20, 3), 0.752875120630, 1e-9);
  EXPECT_EQ(build_boundary_graph(200, 3).num_interior(), 3434u);
  EXPECT_NEAR(lambda_min_graph(200, 3), 0.012937442549, 1e-9);
}

TEST(dirichlet_graph, domination_n2_d2_difference_diagonal) {
  auto report = domination_check(2, 2);
  EXPECT_TRUE(report.passed) << report.summary;
  EXPECT_EQ(report.offdiag_mismatches, 0u);
  EXPECT_EQ(report.diagonal_violations, 0u);
  ASSERT_TRUE(report.psd_checked);
  EXPECT_TRUE(report.psd_passed);
  // Difference 4(I - M) - L = diag(0, 1): smallest eigenvalue exactly zero.
  EXPECT_NEAR(report.min_eigenvalue, 0.0, 1e-12);
}

TEST(dirichlet_graph, domination_n3_d3_diagonal_slack) {
  // d^2 (1 - M)_pp = d^2 - #(mu_p + box) = (7, 6, 8) against L_pp = 6,
  // so the diagonal slack is (1, 0, 2).
  auto est = build_m_est(3, 3);
  auto lap = dirichlet_laplacian(3, 3);
  const auto& fe = est.matrix.entries();
  std::vector<long> slack;
  for (std::size_t k = 0; k < fe.size(); ++k) {
    if (fe[k].row == fe[k].col) {
      slack.push_back(9 - est.numerators[k] - static_cast<long>(lap.degrees[fe[k].row]));
    }
  }
  EXPECT_EQ(slack, (std::vector<long>{1, 0, 2}));

  auto report = domination_check(3, 3);
  EXPECT_TRUE(report.passed) << report.summary;
  EXPECT_GE(report.min_eigenvalue, -1e-12);
}

TEST(dirichlet_graph, domination_holds_on_grid) {
  for (int d : {2, 3}) {
    for (int n = 1; n <= 12; ++n) {
      auto report = domination_check(n, d);
      ASSERT_TRUE(report.passed) << report.summary;
      ASSERT_EQ(report.offdiag_mismatches, 0u);
      ASSERT_EQ(report.diagonal_violations, 0u);
      ASSERT_TRUE(report.psd_checked);
      ASSERT_GE(report.min_eigenvalue, -1e-10) << report.summary;
    }
  }
}

TEST(dirichlet_graph, domination_entrywise_only_above_dense_cap) {
  // dense_cap = 0 skips the eigenvalue step but keeps the exact entrywise
  // comparison; `passed` then reports on the entrywise checks alone.
  auto report = domination_check(60, 2, default_eig_tol, /*dense_cap=*/0);
  EXPECT_TRUE(report.passed) << report.summary;
  EXPECT_FALSE(report.psd_checked);
  EXPECT_NE(report.summary.find("psd skipped"), std::string::npos);
}

TEST(dirichlet_graph, scaled_lambda_min_spread_is_small) {
  // n^2 lambda_min settles quickly: its coefficient of variation over
  // n in {50, 100, ..., 400} stays below 10% for d = 2 and d = 3.
  for (int d : {2, 3}) {
    std::vector<double> scaled;
    for (int n = 50; n <= 400; n += 50) {
      scaled.push_back(static_cast<double>(n) * n * lambda_min_graph(n, d));
    }
    double mean = std::accumulate(scaled.begin(), scaled.end(), 0.0) /
                  static_cast<double>(scaled.size());
    double var = 0.0;
    for (double s : scaled) var += (s - mean) * (s - mean);
    var /= static_cast<double>(scaled.size());
    double cv = std::sqrt(var) / mean;
    EXPECT_LT(cv, 0.10) << "d=" << d << " cv=" << cv;
    EXPECT_GT(mean, 0.0);
  }
}

TEST(dirichlet_graph, validation_errors) {
  EXPECT_THROW(build_boundary_graph(0, 2), dimension_error);
  EXPECT_THROW(build_boundary_graph(3, 1), dimension_error);
  EXPECT_THROW(build_boundary_graph(100, 6, 100), capacity_error);
  EXPECT_THROW(lambda_min_graph(100, 6, default_eig_tol, 100), capacity_error);
}

}  // namespace
}  // namespace estfid
