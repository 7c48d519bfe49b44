#include "estfid/spectral.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "estfid/errors.hpp"
#include "estfid/rng.hpp"
#include "estfid/sparse_matrix.hpp"

namespace {

using namespace estfid;

sparse_sym_matrix random_matrix(std::uint64_t seed, std::size_t dim, double density) {
  std::vector<coo_entry> entries;
  std::uint64_t c = 0;
  for (std::uint32_t i = 0; i < dim; ++i) {
    // Strong diagonal keeps spectra spread out without special structure.
    entries.push_back({i, i, 3.0 * uniform_sym(seed, 1, c++)});
    for (std::uint32_t j = i + 1; j < dim; ++j) {
      if (uniform01(seed, 2, c++) < density) {
        entries.push_back({i, j, uniform_sym(seed, 3, c++)});
      }
    }
  }
  return sparse_sym_matrix(dim, std::move(entries));
}

TEST(spectral, two_by_two_laplacian_extremes) {
  sparse_sym_matrix a(2, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 1, 2.0}});
  auto top = extremal_eig(a, extremal_side::largest);
  auto bot = extremal_eig(a, extremal_side::smallest);
  EXPECT_NEAR(top.value, 3.0, 1e-10);
  EXPECT_NEAR(bot.value, 1.0, 1e-10);
  EXPECT_LE(top.residual, 1e-9);
  EXPECT_LE(bot.residual, 1e-9);
  // Eigenvectors: (1,-1)/sqrt2 and (1,1)/sqrt2 up to sign.
  EXPECT_NEAR(std::abs(top.vector[0]), 1.0 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(top.vector[0] + top.vector[1], 0.0, 1e-8);
  EXPECT_NEAR(bot.vector[0] - bot.vector[1], 0.0, 1e-8);
}

TEST(spectral, identity_and_scaled_identity) {
  auto id = sparse_sym_matrix::identity(7);
  EXPECT_NEAR(extremal_eig(id, extremal_side::largest).value, 1.0, 1e-12);
  EXPECT_NEAR(extremal_eig(id, extremal_side::smallest).value, 1.0, 1e-12);
  auto scaled = lin_comb(0.0, id, 0.0, id, -2.5);
  EXPECT_NEAR(extremal_eig(scaled, extremal_side::largest).value, -2.5, 1e-12);
}

TEST(spectral, diagonal_matrix_extremes) {
  std::vector<coo_entry> entries;
  for (std::uint32_t i = 0; i < 6; ++i) {
    entries.push_back({i, i, static_cast<double>(i) - 2.0});  // -2..3
  }
  sparse_sym_matrix a(6, std::move(entries));
  EXPECT_NEAR(extremal_eig(a, extremal_side::largest).value, 3.0, 1e-10);
  EXPECT_NEAR(extremal_eig(a, extremal_side::smallest).value, -2.0, 1e-10);
}

TEST(spectral, agrees_with_dense_solver_on_random_instances) {
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t dim =
        5 + counter_hash(0xabc, 0, static_cast<std::uint64_t>(trial)) % 76;
    const double density = 0.05 + 0.4 * uniform01(0xabc, 1, static_cast<std::uint64_t>(trial));
    auto a = random_matrix(1000 + static_cast<std::uint64_t>(trial), dim, density);
    auto spec = dense_sym_eig(a);
    auto top = extremal_eig(a, extremal_side::largest);
    auto bot = extremal_eig(a, extremal_side::smallest);
    ASSERT_NEAR(top.value, spec.values.back(), 1e-9) << "trial " << trial;
    ASSERT_NEAR(bot.value, spec.values.front(), 1e-9) << "trial " << trial;
  }
}

TEST(spectral, results_are_deterministic) {
  auto a = random_matrix(4242, 60, 0.2);
  auto r1 = extremal_eig(a, extremal_side::largest);
  auto r2 = extremal_eig(a, extremal_side::largest);
  EXPECT_EQ(r1.value, r2.value);
  EXPECT_EQ(r1.vector, r2.vector);
  EXPECT_EQ(r1.iterations, r2.iterations);
}

TEST(spectral, residual_bound_holds_on_returned_pair) {
  auto a = random_matrix(77, 50, 0.3);
  auto r = extremal_eig(a, extremal_side::largest, 1e-11);
  auto ax = a.matvec(r.vector);
  double res = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    double t = ax[i] - r.value * r.vector[i];
    res += t * t;
  }
  res = std::sqrt(res);
  EXPECT_LE(res, 1e-11 * std::max(1.0, std::abs(r.value)) * 1.01);
  EXPECT_NEAR(res, r.residual, 1e-13);
}

TEST(spectral, iteration_budget_violation_throws) {
  auto a = random_matrix(99, 120, 0.15);
  EXPECT_THROW(extremal_eig(a, extremal_side::largest, 1e-12, 0), convergence_error);
}

TEST(spectral, dense_spectrum_sorted_and_capped) {
  auto a = random_matrix(5, 12, 0.5);
  auto spec = dense_sym_eig(a);
  ASSERT_EQ(spec.values.size(), 12u);
  for (std::size_t i = 0; i + 1 < spec.values.size(); ++i) {
    EXPECT_LE(spec.values[i], spec.values[i + 1]);
  }
  EXPECT_THROW(dense_sym_eig(a, false, 8), capacity_error);
}

TEST(spectral, psd_check_accepts_gram_matrix_and_rejects_indefinite) {
  // Gram matrix of two vectors: PSD with a zero eigenvalue.
  sparse_sym_matrix gram(2, {{0, 0, 4.0}, {0, 1, 2.0}, {1, 1, 1.0}});
  auto ok = psd_check(gram);
  EXPECT_TRUE(ok.positive_semidefinite);
  EXPECT_GE(ok.min_eigenvalue, -1e-10);

  sparse_sym_matrix indef(2, {{0, 0, 1.0}, {0, 1, 3.0}, {1, 1, 1.0}});
  auto bad = psd_check(indef);
  EXPECT_FALSE(bad.positive_semidefinite);
  EXPECT_NEAR(bad.min_eigenvalue, -2.0, 1e-9);
  ASSERT_EQ(bad.witness.size(), 2u);
  // The witness certifies a negative quadratic form.
  EXPECT_LT(indef.quadratic_form(bad.witness), 0.0);
}

TEST(pencil, closed_form_ratio_on_path_graph) {
  // K = (n/sqrt2) L, M = (sqrt2/n)(I - L/6) for the 3-node path Laplacian and
  // n = 4; the smallest pencil eigenvalue is 8(2-sqrt2)/(1-(2-sqrt2)/6).
  const double n = 4.0;
  sparse_sym_matrix lap(3, {{0, 0, 2.0}, {0, 1, -1.0}, {1, 1, 2.0}, {1, 2, -1.0}, {2, 2, 2.0}});
  auto scale = [](double f, const sparse_sym_matrix& m) {
    return lin_comb(f, m, 0.0, m, 0.0);
  };
  auto stiffness = scale(n / std::sqrt(2.0), lap);
  auto mass = lin_comb(-(std::sqrt(2.0) / n) / 6.0, lap, 0.0, lap, std::sqrt(2.0) / n);
  auto r = pencil_min_eig(stiffness, mass);
  const double lam = 2.0 - std::sqrt(2.0);
  const double expect = (n * n / 2.0) * lam / (1.0 - lam / 6.0);
  EXPECT_NEAR(r.value, expect, 1e-9);
  EXPECT_NEAR(r.value, 5.193321003, 1e-8);
}

TEST(pencil, agrees_with_dense_generalized_solver) {
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t dim =
        4 + counter_hash(0xdef, 0, static_cast<std::uint64_t>(trial)) % 57;
    // K: random PSD (Laplacian-like: diagonally dominant), M: SPD.
    std::vector<coo_entry> k_entries, m_entries;
    std::uint64_t c = 0;
    std::vector<double> rowsum(dim, 0.0);
    std::vector<coo_entry> k_offs;
    for (std::uint32_t i = 0; i < dim; ++i) {
      for (std::uint32_t j = i + 1; j < dim; ++j) {
        if (uniform01(0x111 + static_cast<std::uint64_t>(trial), 0, c++) < 0.3) {
          double w = uniform01(0x222 + static_cast<std::uint64_t>(trial), 0, c++);
          k_offs.push_back({i, j, -w});
          rowsum[i] += w;
          rowsum[j] += w;
        }
      }
    }
    // K: weighted-Laplacian plus a small diagonal shift (SPD); M: diagonally
    // dominant tridiagonal (SPD).
    for (std::uint32_t i = 0; i < dim; ++i) {
      k_entries.push_back({i, i, rowsum[i] + 0.05});
      m_entries.push_back({i, i, 1.0 + uniform01(0x444 + static_cast<std::uint64_t>(trial), 0, i)});
      if (i + 1 < dim) {
        m_entries.push_back({i, i + 1, 0.2 * uniform_sym(0x555 + static_cast<std::uint64_t>(trial), 0, i)});
      }
    }
    k_entries.insert(k_entries.end(), k_offs.begin(), k_offs.end());
    sparse_sym_matrix stiffness(dim, std::move(k_entries));
    sparse_sym_matrix mass(dim, std::move(m_entries));

    Eigen::MatrixXd kd = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                               static_cast<Eigen::Index>(dim));
    Eigen::MatrixXd md = kd;
    for (const auto& e : stiffness.entries()) {
      kd(e.row, e.col) = e.value;
      kd(e.col, e.row) = e.value;
    }
    for (const auto& e : mass.entries()) {
      md(e.row, e.col) = e.value;
      md(e.col, e.row) = e.value;
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(kd, md);
    ASSERT_EQ(ges.info(), Eigen::Success);

    auto r = pencil_min_eig(stiffness, mass);
    ASSERT_NEAR(r.value, ges.eigenvalues()(0), 1e-8) << "trial " << trial << " dim " << dim;
    // Residual contract: ||K u - lambda M u|| <= tol * max(1, |lambda|).
    EXPECT_LE(r.residual, default_eig_tol * std::max(1.0, std::abs(r.value)) * 1.01);
  }
}

TEST(pencil, rejects_zero_and_negative_mass) {
  auto stiffness = sparse_sym_matrix::identity(3);
  sparse_sym_matrix zero_mass(3, {});
  EXPECT_THROW(pencil_min_eig(stiffness, zero_mass), not_positive_definite_error);
  auto neg_mass = lin_comb(0.0, stiffness, 0.0, stiffness, -1.0);  // -I
  EXPECT_THROW(pencil_min_eig(stiffness, neg_mass), not_positive_definite_error);
}

TEST(pencil, dimension_mismatch_throws) {
  EXPECT_THROW(
      pencil_min_eig(sparse_sym_matrix::identity(3), sparse_sym_matrix::identity(4)),
      dimension_error);
}

}  // namespace
