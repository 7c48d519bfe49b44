// Tests for the deficiency sweeps, the 1/n least-squares extrapolation, and
// the closed-form bound-comparison table.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "estfid/asymptotics.hpp"

namespace estfid {
namespace {

TEST(asymptotics, sweep_row_n6_d3) {
  auto row = compute_sweep_row(6, 3);
  ASSERT_FALSE(row.error) << *row.error;
  EXPECT_EQ(row.n, 6);
  EXPECT_EQ(row.dim, 7u);

  auto fid = fidelity(6, 3);
  EXPECT_NEAR(row.f_est, fid.f_est, 1e-12);
  EXPECT_NEAR(row.h_nd, 36.0 * (1.0 - fid.f_est), 1e-10);

  ASSERT_TRUE(row.lambda_graph);
  EXPECT_NEAR(*row.lambda_graph, lambda_min_graph(6, 3), 1e-10);
  ASSERT_TRUE(row.sandwich_lower);
  EXPECT_NEAR(*row.sandwich_lower, 36.0 * *row.lambda_graph / 9.0, 1e-12);
  // At n = 6 the polynomial test vector is the indicator of (3,2,1) with
  // Rayleigh quotient exactly 1/3, so the upper bound is 36 (1 - 1/3) = 24.
  ASSERT_TRUE(row.variational_upper);
  EXPECT_NEAR(*row.variational_upper, 24.0, 1e-9);

  EXPECT_LE(*row.sandwich_lower, row.h_nd + 1e-9);
  EXPECT_LE(row.h_nd, *row.variational_upper + 1e-9);
}

TEST(asymptotics, sweep_row_below_test_vector_threshold) {
  auto row = compute_sweep_row(5, 3);
  ASSERT_FALSE(row.error);
  EXPECT_TRUE(row.lambda_graph);
  EXPECT_TRUE(row.sandwich_lower);
  EXPECT_FALSE(row.variational_upper);
}

TEST(asymptotics, sweep_row_d4_has_no_enclosure) {
  auto row = compute_sweep_row(10, 4);
  ASSERT_FALSE(row.error);
  EXPECT_GT(row.f_est, 0.0);
  EXPECT_FALSE(row.lambda_graph);
  EXPECT_FALSE(row.sandwich_lower);
  EXPECT_FALSE(row.variational_upper);
}

TEST(asymptotics, sweep_row_captures_failures) {
  auto row = compute_sweep_row(8, 3, default_eig_tol, /*max_diagrams=*/2);
  ASSERT_TRUE(row.error);
  EXPECT_NE(row.error->find("2"), std::string::npos);
}

TEST(asymptotics, sweep_is_deterministic_across_threads) {
  std::vector<int> ns{10, 20, 30};
  auto series = sweep(2, ns, default_eig_tol, default_max_diagrams, /*threads=*/3);
  ASSERT_EQ(series.rows.size(), 3u);
  for (std::size_t i = 0; i < ns.size(); ++i) {
    auto solo = compute_sweep_row(ns[i], 2);
    ASSERT_FALSE(series.rows[i].error);
    EXPECT_EQ(series.rows[i].f_est, solo.f_est);
    EXPECT_EQ(series.rows[i].h_nd, solo.h_nd);
    EXPECT_EQ(*series.rows[i].lambda_graph, *solo.lambda_graph);
  }
  EXPECT_THROW(sweep(1, ns), dimension_error);
}

sweep_series synthetic_series(const std::vector<int>& ns, double h, double c1, double c2) {
  sweep_series s;
  s.d = 2;
  for (int n : ns) {
    sweep_row r;
    r.n = n;
    const double inv = 1.0 / n;
    r.h_nd = h + c1 * inv + c2 * inv * inv;
    s.rows.push_back(r);
  }
  return s;
}

TEST(asymptotics, extrapolate_recovers_exact_model) {
  std::vector<int> ns{50, 100, 150, 200, 250, 300, 350, 400};
  auto series = synthetic_series(ns, 7.0, 3.0, -11.0);
  auto fit = extrapolate(series, {50, 400}, 3);
  EXPECT_EQ(fit.rows_used, 8u);
  EXPECT_NEAR(fit.h_infinity, 7.0, 1e-9);
  ASSERT_EQ(fit.coefficients.size(), 2u);
  EXPECT_NEAR(fit.coefficients[0], 3.0, 1e-6);
  EXPECT_NEAR(fit.coefficients[1], -11.0, 1e-4);
  EXPECT_LT(fit.ci, 1e-9);

  auto two = synthetic_series(ns, 5.0, 4.0, 0.0);
  auto fit2 = extrapolate(two, {50, 400}, 2);
  EXPECT_NEAR(fit2.h_infinity, 5.0, 1e-9);
  ASSERT_EQ(fit2.coefficients.size(), 1u);
  EXPECT_NEAR(fit2.coefficients[0], 4.0, 1e-7);
}

TEST(asymptotics, extrapolate_filters_window_and_failures) {
  std::vector<int> ns{20, 50, 100, 150, 200, 600};
  auto series = synthetic_series(ns, 2.0, 1.0, 0.5);
  sweep_row bad;
  bad.n = 120;
  bad.error = "solver exploded";
  series.rows.push_back(bad);
  auto fit = extrapolate(series, {50, 200}, 3);
  EXPECT_EQ(fit.rows_used, 4u);  // 50, 100, 150, 200; the failed row is skipped
  EXPECT_NEAR(fit.h_infinity, 2.0, 1e-9);
}

TEST(asymptotics, extrapolate_validation) {
  std::vector<int> ns{100, 100, 100};
  auto clustered = synthetic_series(ns, 1.0, 1.0, 1.0);
  EXPECT_THROW(extrapolate(clustered, {50, 200}, 3), ill_conditioned_fit_error);

  auto series = synthetic_series({50, 100, 150, 200}, 1.0, 1.0, 1.0);
  EXPECT_THROW(extrapolate(series, {50, 200}, 4), dimension_error);
  EXPECT_THROW(extrapolate(series, {60, 90}, 2), dimension_error);  // empty window
}

TEST(asymptotics, bounds_table_frozen_d10) {
  auto rows = bounds_table({2, 3, 10});
  ASSERT_EQ(rows.size(), 3u);
  const double pi = std::numbers::pi;

  ASSERT_TRUE(rows[0].exact);
  EXPECT_DOUBLE_EQ(*rows[0].exact, pi * pi);
  ASSERT_TRUE(rows[1].exact);
  EXPECT_DOUBLE_EQ(*rows[1].exact, 56.0 * pi * pi / 9.0);
  EXPECT_FALSE(rows[2].exact);

  const bounds_row& r = rows[2];
  EXPECT_EQ(r.d, 10);
  EXPECT_NEAR(r.christandl_lo, 6.1875, 1e-12);
  EXPECT_NEAR(r.christandl_hi, 17677.6695297, 1e-4);
  EXPECT_NEAR(r.yang_hi, 1776528.7922, 1e-3);
  EXPECT_NEAR(r.haah_lo, 0.0273024553196, 1e-10);
  EXPECT_DOUBLE_EQ(r.kahn_hi, 13398.0);
  EXPECT_NEAR(r.conjecture_lo, 195.513360285, 1e-7);
}

TEST(asymptotics, bounds_orderings) {
  std::vector<int> ds;
  for (int d = 2; d <= 100; ++d) ds.push_back(d);
  auto rows = bounds_table(ds);
  for (const auto& r : rows) {
    ASSERT_LE(r.christandl_lo, r.kahn_hi) << "d=" << r.d;
    ASSERT_LE(r.haah_lo, r.kahn_hi) << "d=" << r.d;
    ASSERT_LE(r.conjecture_lo, r.kahn_hi) << "d=" << r.d;
    ASSERT_LE(r.kahn_hi, r.yang_hi) << "d=" << r.d;
    if (r.d >= 8) {
      // The quintic upper bound overtakes the quartic one only from d = 8 up.
      ASSERT_LE(r.kahn_hi, r.christandl_hi) << "d=" << r.d;
    }
  }
}

TEST(asymptotics, haah_constants) {
  EXPECT_NEAR(haah_alpha(), 2.813487805e-6, 3e-15);
  EXPECT_NEAR(haah_beta(), 1.220839986, 1e-9);
}

TEST(asymptotics, large_d_bound_ratios) {
  auto rows = bounds_table({10000});
  const bounds_row& r = rows[0];
  const double alpha = haah_alpha();
  const double want_haah = 3.0 / (2.0 * alpha);
  const double want_conj = 12.0 * std::exp(3.0) / std::numbers::pi;
  EXPECT_NEAR(r.kahn_hi / r.haah_lo, want_haah, 0.01 * want_haah);
  EXPECT_NEAR(r.kahn_hi / r.conjecture_lo, want_conj, 0.01 * want_conj);
}

TEST(asymptotics, bounds_table_validation) {
  EXPECT_THROW(bounds_table({1}), dimension_error);
}

}  // namespace
}  // namespace estfid
