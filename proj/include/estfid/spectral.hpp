#pragma once

// Extremal eigenvalue machinery:
//   - extremal_eig: largest/smallest eigenpair of a sparse symmetric matrix by
//     Lanczos with full reorthogonalization.  When a definite shift of the
//     matrix admits a sparse Cholesky factorization the solver runs on the
//     inverted (shift-invert) operator, which turns clustered extremal
//     eigenvalues into well separated dominant ones; the residual is always
//     verified on the original matrix and the plain iteration is the fallback.
//   - dense_sym_eig: dense full-spectrum oracle (Eigen) for cross-checks,
//   - pencil_min_eig: smallest eigenvalue of K u = lambda M u via Lanczos in
//     the M inner product on (K + s M)^{-1} M (no explicit inverse is formed),
//   - psd_check: dense positive-semidefiniteness test with witness vector.
//
// All solvers start from the normalized all-ones vector plus a fixed tiny
// perturbation that breaks exact symmetries (an unperturbed all-ones start can
// be exactly orthogonal to the wanted eigenvector); the perturbation is a
// deterministic hash of the index, so every run performs the same operations
// in the same order and results are bit-reproducible.

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <new>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "estfid/errors.hpp"
#include "estfid/rng.hpp"
#include "estfid/sparse_matrix.hpp"

namespace estfid {

struct eig_result {
  double value = 0.0;
  std::vector<double> vector;  // unit norm (Euclidean, or M-norm for pencils)
  double residual = 0.0;       // ||A x - lambda x|| resp. ||K u - lambda M u||
  std::size_t iterations = 0;
};

enum class extremal_side { largest, smallest };

inline constexpr double default_eig_tol = 1e-10;
inline constexpr std::size_t default_max_lanczos_iterations = 10000;
inline constexpr std::size_t default_dense_cap = 3000;

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) strictly
/// below x, via the classic Sturm sequence.
inline std::size_t tridiag_count_below(std::span<const double> diag,
                                       std::span<const double> off, double x) {
  std::size_t count = 0;
  double q = diag[0] - x;
  if (q < 0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    if (q == 0.0) q = -1e-300;
    q = diag[i] - x - off[i - 1] * off[i - 1] / q;
    if (q < 0) ++count;
  }
  return count;
}

/// Extremal eigenvalue of a symmetric tridiagonal by bisection on the Sturm
/// count; accurate to a few ulp of the Gershgorin interval width.
inline double tridiag_extremal_value(std::span<const double> diag,
                                     std::span<const double> off, extremal_side which) {
  const std::size_t m = diag.size();
  double lo = diag[0], hi = diag[0];
  for (std::size_t i = 0; i < m; ++i) {
    double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i + 1 < m ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  if (lo == hi) return lo;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    std::size_t below = tridiag_count_below(diag, off, mid);
    bool go_left = (which == extremal_side::largest) ? (below == m) : (below >= 1);
    if (go_left) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Solves (T - sigma I) y = rhs in place for tridiagonal T using elimination
/// with partial pivoting; zero pivots are replaced by a tiny value (standard
/// inverse-iteration practice).
inline void tridiag_shifted_solve(std::span<const double> diag, std::span<const double> off,
                                  double sigma, double pivot_floor, std::vector<double>& y) {
  const std::size_t m = diag.size();
  std::vector<double> a(m), b(m, 0.0), c(m, 0.0);  // main, super, super-super
  for (std::size_t i = 0; i < m; ++i) a[i] = diag[i] - sigma;
  for (std::size_t i = 0; i + 1 < m; ++i) b[i] = off[i];
  for (std::size_t i = 0; i + 1 < m; ++i) {
    double sub = off[i];  // current subdiagonal element
    if (std::abs(sub) > std::abs(a[i])) {
      std::swap(a[i], sub);
      std::swap(b[i], a[i + 1]);
      if (i + 2 < m) std::swap(c[i], b[i + 1]);
      std::swap(y[i], y[i + 1]);
    }
    if (std::abs(a[i]) < pivot_floor) a[i] = (a[i] < 0 ? -pivot_floor : pivot_floor);
    double l = sub / a[i];
    a[i + 1] -= l * b[i];
    if (i + 2 < m) b[i + 1] -= l * c[i];
    y[i + 1] -= l * y[i];
  }
  if (std::abs(a[m - 1]) < pivot_floor) a[m - 1] = (a[m - 1] < 0 ? -pivot_floor : pivot_floor);
  for (std::size_t ii = m; ii-- > 0;) {
    double v = y[ii];
    if (ii + 1 < m) v -= b[ii] * y[ii + 1];
    if (ii + 2 < m) v -= c[ii] * y[ii + 2];
    y[ii] = v / a[ii];
  }
}

/// Unit eigenvector of the tridiagonal for an extremal eigenvalue theta,
/// via two steps of inverse iteration from a deterministic start.
inline std::vector<double> tridiag_eigvec(std::span<const double> diag,
                                          std::span<const double> off, double theta) {
  const std::size_t m = diag.size();
  double scale = std::abs(theta);
  for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs(diag[i]));
  for (std::size_t i = 0; i + 1 < m; ++i) scale = std::max(scale, std::abs(off[i]));
  const double pivot_floor = std::max(scale, 1.0) * 1e-292;
  std::vector<double> y(m);
  for (std::size_t i = 0; i < m; ++i) y[i] = uniform_sym(0x1d5ce7a1u, 17, i);
  for (int step = 0; step < 2; ++step) {
    tridiag_shifted_solve(diag, off, theta, pivot_floor, y);
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) {  // degenerate: fall back to e_last
      std::fill(y.begin(), y.end(), 0.0);
      y[m - 1] = 1.0;
      continue;
    }
    for (double& v : y) v /= norm;
  }
  return y;
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Deterministic start vector: all ones plus a fixed 1e-8 hash perturbation so
/// the start is never exactly orthogonal to an eigenvector of a structured
/// matrix (e.g. matrices commuting with coordinate reversal).
inline std::vector<double> lanczos_start(std::size_t dim) {
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = 1.0 + 1e-8 * uniform_sym(0x0a11c0deULL, 1, i);
  return v;
}

/// Lanczos with full reorthogonalization for the extremal eigenvalue of an
/// abstract self-adjoint operator.  `apply(v, out)` evaluates the operator;
/// `inner` is the inner product it is self-adjoint under (Euclidean dot for
/// ordinary matrices, the M inner product for pencils).  Convergence is tested
/// on the candidate pair through one extra operator application:
/// ||B x - theta x||_inner <= tol * max(1, |theta|).  Exact invariant
/// subspaces are escaped through deterministic replacement vectors, so a start
/// vector deficient in the wanted eigenvector still cannot yield a wrong
/// answer: either the iteration spans the space or the candidate residual
/// gates the result.
template <class Apply, class Inner>
inline eig_result lanczos_extremal_core(std::size_t dim, Apply&& apply, Inner&& inner,
                                        extremal_side which, double tol,
                                        std::size_t max_iterations,
                                        std::uint64_t breakdown_seed) {
  auto inorm = [&](std::span<const double> v) {
    double nsq = inner(v, v);
    return nsq > 0.0 ? std::sqrt(nsq) : 0.0;
  };

  std::vector<std::vector<double>> basis;
  std::vector<double> alphas, betas;
  std::vector<double> w(dim), x(dim);

  {
    std::vector<double> v0 = lanczos_start(dim);
    double n0sq = inner(v0, v0);
    if (!std::isfinite(n0sq) || n0sq <= 0.0) {
      throw not_positive_definite_error(
          "lanczos: start vector has non-positive norm in the problem inner product");
    }
    double n0 = std::sqrt(n0sq);
    for (double& v : v0) v /= n0;
    basis.push_back(std::move(v0));
  }

  double best_residual = std::numeric_limits<double>::infinity();
  double t_scale = 1.0;
  const std::size_t step_cap = std::min(max_iterations, dim);

  for (std::size_t k = 0; k < step_cap; ++k) {
    apply(basis[k], w);
    double alpha = inner(basis[k], w);
    alphas.push_back(alpha);
    axpy(-alpha, basis[k], w);
    if (k > 0) axpy(-betas[k - 1], basis[k - 1], w);
    // Full reorthogonalization (one modified Gram-Schmidt sweep, repeated once
    // if the sweep removed most of the vector).
    double pre = inorm(w);
    for (int sweep = 0; sweep < 2; ++sweep) {
      for (const auto& b : basis) axpy(-inner(b, w), b, w);
      double post = inorm(w);
      if (post > 0.5 * pre) break;
      pre = post;
    }
    double beta = inorm(w);
    t_scale = std::max({t_scale, std::abs(alpha), beta});

    // Extremal Ritz pair of the current tridiagonal.
    double theta;
    std::vector<double> s;
    if (alphas.size() == 1) {
      theta = alphas[0];
      s = {1.0};
    } else {
      theta = tridiag_extremal_value(alphas, betas, which);
      s = tridiag_eigvec(alphas, betas, theta);
    }
    const double scale = std::max(1.0, std::abs(theta));
    const double estimate = beta * std::abs(s.back());
    const bool spanned = (basis.size() == dim);

    if (estimate <= tol * scale || spanned) {
      std::fill(x.begin(), x.end(), 0.0);
      for (std::size_t j = 0; j < basis.size(); ++j) axpy(s[j], basis[j], x);
      double xn = inorm(x);
      if (xn > 0.0) {
        for (double& v : x) v /= xn;
        apply(x, w);
        axpy(-theta, x, w);
        double residual = inorm(w);
        best_residual = std::min(best_residual, residual);
        if (residual <= tol * scale || spanned) {
          if (residual > tol * scale) {
            throw convergence_error(
                "lanczos: stagnated at residual " + std::to_string(residual) +
                    " after spanning the full space",
                residual);
          }
          return eig_result{theta, std::move(x), residual, k + 1};
        }
      }
      apply(basis[k], w);  // rebuild the Lanczos recurrence state in w
      axpy(-alphas[k], basis[k], w);
      if (k > 0) axpy(-betas[k - 1], basis[k - 1], w);
      for (const auto& b : basis) axpy(-inner(b, w), b, w);
      beta = inorm(w);
    }

    if (beta <= t_scale * 1e-13) {
      // Invariant subspace found: continue on a deterministic fresh direction.
      betas.push_back(0.0);
      std::size_t attempts = 0;
      double nn = 0.0;
      do {
        for (std::size_t i = 0; i < dim; ++i) {
          w[i] = uniform_sym(breakdown_seed + attempts, k, i);
        }
        for (int sweep = 0; sweep < 2; ++sweep) {
          for (const auto& b : basis) axpy(-inner(b, w), b, w);
        }
        nn = inorm(w);
        ++attempts;
      } while (nn <= t_scale * 1e-13 && attempts < 8);
      if (nn <= t_scale * 1e-13) {
        throw convergence_error("lanczos: unable to extend Krylov basis", best_residual);
      }
      for (double& v : w) v /= nn;
      basis.push_back(w);
    } else {
      betas.push_back(beta);
      auto& next = basis.emplace_back(dim);
      for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / beta;
    }
  }
  throw convergence_error("lanczos: no convergence within " +
                              std::to_string(step_cap) + " iterations",
                          best_residual);
}

/// Builds sigma*I - A (negate = true) or A - sigma*I (negate = false) as an
/// Eigen sparse matrix, both triangles populated.
inline Eigen::SparseMatrix<double> shifted_matrix(const sparse_sym_matrix& a, double sigma,
                                                  bool negate) {
  const auto n = static_cast<Eigen::Index>(a.dim());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * a.entries().size() + a.dim());
  const double flip = negate ? -1.0 : 1.0;
  for (const auto& e : a.entries()) {
    trips.emplace_back(e.row, e.col, flip * e.value);
    if (e.row != e.col) trips.emplace_back(e.col, e.row, flip * e.value);
  }
  const double shift = negate ? sigma : -sigma;
  for (Eigen::Index i = 0; i < n; ++i) trips.emplace_back(i, i, shift);
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace detail

inline Eigen::MatrixXd to_dense(const sparse_sym_matrix& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(a.dim()),
                                            static_cast<Eigen::Index>(a.dim()));
  for (const auto& e : a.entries()) {
    m(e.row, e.col) = e.value;
    m(e.col, e.row) = e.value;
  }
  return m;
}

inline Eigen::SparseMatrix<double> to_eigen_sparse(const sparse_sym_matrix& a) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * a.entries().size());
  for (const auto& e : a.entries()) {
    trips.emplace_back(e.row, e.col, e.value);
    if (e.row != e.col) trips.emplace_back(e.col, e.row, e.value);
  }
  Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(a.dim()),
                                static_cast<Eigen::Index>(a.dim()));
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

/// Extremal eigenpair of a sparse symmetric matrix.  Residual contract:
/// ||A x - lambda x|| <= tol * max(1, |lambda|), always measured on A itself.
///
/// Strategy: shift just outside the Gershgorin hull makes sigma*I - A (resp.
/// A - sigma*I) positive definite; if its sparse LDLT succeeds, Lanczos runs
/// on the inverse operator, whose dominant eigenvalue 1/(sigma - lambda) is
/// well separated even when A's extremal eigenvalues cluster (the common case
/// here: spectra accumulating at the row-sum bound).  Any failure — no
/// definite factorization, non-convergence, or a candidate missing the
/// residual gate — falls back to plain Lanczos on A.
inline eig_result extremal_eig(const sparse_sym_matrix& a, extremal_side which,
                               double tol = default_eig_tol,
                               std::size_t max_iterations = default_max_lanczos_iterations) {
  const std::size_t dim = a.dim();
  if (dim == 0) throw dimension_error("extremal_eig: zero-dimensional matrix");
  if (tol <= 0) throw dimension_error("extremal_eig: tolerance must be positive");

  auto euclid = [](std::span<const double> p, std::span<const double> q) {
    return detail::dot(p, q);
  };

  // Gershgorin hull of A.
  std::vector<double> diag(dim, 0.0), radius(dim, 0.0);
  for (const auto& e : a.entries()) {
    if (e.row == e.col) {
      diag[e.row] += e.value;
    } else {
      radius[e.row] += std::abs(e.value);
      radius[e.col] += std::abs(e.value);
    }
  }
  double glo = std::numeric_limits<double>::infinity(), ghi = -glo;
  for (std::size_t i = 0; i < dim; ++i) {
    glo = std::min(glo, diag[i] - radius[i]);
    ghi = std::max(ghi, diag[i] + radius[i]);
  }
  const double hull_scale = std::max({1.0, std::abs(glo), std::abs(ghi)});
  const double sigma = (which == extremal_side::largest) ? ghi + 1e-12 * hull_scale
                                                         : glo - 1e-12 * hull_scale;

  try {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
    ldlt.compute(detail::shifted_matrix(a, sigma, which == extremal_side::largest));
    if (ldlt.info() == Eigen::Success && ldlt.vectorD().minCoeff() > 0.0) {
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(dim));
      auto apply = [&](std::span<const double> v, std::span<double> out) {
        for (std::size_t i = 0; i < dim; ++i) rhs[static_cast<Eigen::Index>(i)] = v[i];
        Eigen::VectorXd sol = ldlt.solve(rhs);
        for (std::size_t i = 0; i < dim; ++i) out[i] = sol[static_cast<Eigen::Index>(i)];
      };
      const double width = std::max(1.0, ghi - glo);
      double tol_theta = std::max(tol / width, 1e-15);
      std::size_t used = 0;
      std::vector<double> r(dim);
      for (int round = 0; round < 3; ++round) {
        eig_result core = detail::lanczos_extremal_core(dim, apply, euclid,
                                                        extremal_side::largest, tol_theta,
                                                        max_iterations, 0xb5ec7d00ULL);
        used += core.iterations;
        if (core.value > 0.0) {
          const double lambda = (which == extremal_side::largest) ? sigma - 1.0 / core.value
                                                                  : sigma + 1.0 / core.value;
          a.matvec(core.vector, r);
          detail::axpy(-lambda, core.vector, r);
          const double residual = detail::norm2(r);
          if (residual <= tol * std::max(1.0, std::abs(lambda))) {
            return eig_result{lambda, std::move(core.vector), residual, used};
          }
        }
        if (tol_theta <= 1e-15) break;
        tol_theta = std::max(tol_theta * 1e-2, 1e-15);
      }
    }
  } catch (const convergence_error&) {
    // fall through to the plain iteration
  } catch (const not_positive_definite_error&) {
  } catch (const std::bad_alloc&) {
  }

  auto apply_a = [&](std::span<const double> v, std::span<double> out) { a.matvec(v, out); };
  return detail::lanczos_extremal_core(dim, apply_a, euclid, which, tol, max_iterations,
                                       0xb5ec7d00ULL);
}

struct dense_spectrum {
  std::vector<double> values;  // ascending
  Eigen::MatrixXd vectors;     // orthonormal columns; empty when not requested
};

/// Full spectrum through Eigen's dense symmetric solver; the verification
/// oracle for the iterative paths.
inline dense_spectrum dense_sym_eig(const sparse_sym_matrix& a, bool with_vectors = false,
                                    std::size_t dense_cap = default_dense_cap) {
  if (a.dim() > dense_cap) {
    throw capacity_error("dense_sym_eig: dim " + std::to_string(a.dim()) +
                         " exceeds dense cap " + std::to_string(dense_cap));
  }
  if (a.dim() == 0) throw dimension_error("dense_sym_eig: zero-dimensional matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      to_dense(a), with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  dense_spectrum out;
  out.values.assign(solver.eigenvalues().data(),
                    solver.eigenvalues().data() + solver.eigenvalues().size());
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

/// Smallest eigenvalue of the symmetric-definite pencil K u = lambda M u
/// (K positive semidefinite, M positive definite).  Lanczos runs in the M
/// inner product on the operator (K + s M)^{-1} M, whose dominant eigenvalue
/// is 1/(lambda_min + s); the small regularization s > 0 keeps the factored
/// matrix definite even when K itself is singular.  Residual contract:
/// ||K u - lambda M u|| <= tol * max(1, |lambda|) at ||u||_M = 1.
inline eig_result pencil_min_eig(const sparse_sym_matrix& stiffness,
                                 const sparse_sym_matrix& mass, double tol = default_eig_tol,
                                 std::size_t max_iterations = default_max_lanczos_iterations) {
  const std::size_t dim = stiffness.dim();
  if (dim == 0) throw dimension_error("pencil_min_eig: zero-dimensional pencil");
  if (mass.dim() != dim) throw dimension_error("pencil_min_eig: K and M dimensions differ");
  if (tol <= 0) throw dimension_error("pencil_min_eig: tolerance must be positive");

  const double kn = stiffness.infinity_norm();
  const double mn = mass.infinity_norm();
  if (mn <= 0.0) {
    throw not_positive_definite_error("pencil_min_eig: mass matrix is zero");
  }
  const double s = 1e-6 * (kn + mn) / mn;  // in eigenvalue units ||K|| / ||M||

  sparse_sym_matrix regularized = lin_comb(1.0, stiffness, s, mass, 0.0);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  ldlt.compute(to_eigen_sparse(regularized));
  if (ldlt.info() != Eigen::Success || ldlt.vectorD().minCoeff() <= 0.0) {
    throw not_positive_definite_error(
        "pencil_min_eig: K + s M is not positive definite (K must be positive "
        "semidefinite and M positive definite)");
  }

  auto m_inner = [&](std::span<const double> p, std::span<const double> q) {
    return mass.bilinear_form(p, q);
  };
  std::vector<double> tmp(dim);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(dim));
  auto apply = [&](std::span<const double> v, std::span<double> out) {
    mass.matvec(v, tmp);
    for (std::size_t i = 0; i < dim; ++i) rhs[static_cast<Eigen::Index>(i)] = tmp[i];
    Eigen::VectorXd sol = ldlt.solve(rhs);
    for (std::size_t i = 0; i < dim; ++i) out[i] = sol[static_cast<Eigen::Index>(i)];
  };

  double tol_theta = std::min(tol, 1e-12);
  std::size_t used = 0;
  double best_residual = std::numeric_limits<double>::infinity();
  std::vector<double> ku(dim), mu(dim);
  for (int round = 0; round < 3; ++round) {
    eig_result core = detail::lanczos_extremal_core(dim, apply, m_inner,
                                                    extremal_side::largest, tol_theta,
                                                    max_iterations, 0x5ca1ab1eULL);
    used += core.iterations;
    if (core.value > 0.0) {
      const double lambda = 1.0 / core.value - s;
      stiffness.matvec(core.vector, ku);
      mass.matvec(core.vector, mu);
      detail::axpy(-lambda, mu, ku);
      const double residual = detail::norm2(ku);
      best_residual = std::min(best_residual, residual);
      if (residual <= tol * std::max(1.0, std::abs(lambda))) {
        return eig_result{lambda, std::move(core.vector), residual, used};
      }
    }
    if (tol_theta <= 1e-15) break;
    tol_theta = std::max(tol_theta * 1e-2, 1e-15);
  }
  throw convergence_error("pencil_min_eig: residual gate not reached", best_residual);
}

struct psd_report {
  bool positive_semidefinite = false;
  double min_eigenvalue = 0.0;
  std::vector<double> witness;  // violating unit vector when the check fails
};

/// Dense check that min eig(A) >= -tol; on failure also returns the violating
/// eigenvector as a witness.
inline psd_report psd_check(const sparse_sym_matrix& a, double tol = default_eig_tol,
                            std::size_t dense_cap = default_dense_cap) {
  psd_report report;
  auto spectrum = dense_sym_eig(a, /*with_vectors=*/false, dense_cap);
  report.min_eigenvalue = spectrum.values.front();
  report.positive_semidefinite = report.min_eigenvalue >= -tol;
  if (!report.positive_semidefinite) {
    auto with_vecs = dense_sym_eig(a, /*with_vectors=*/true, dense_cap);
    report.witness.assign(with_vecs.vectors.col(0).data(),
                          with_vecs.vectors.col(0).data() + a.dim());
  }
  return report;
}

}  // namespace estfid
