#pragma once

// n-sweeps of the scaled deficiency h_{n,d} = n^2 (1 - F_est(n,d)), least-
// squares extrapolation of the n -> infinity limit, and the closed-form
// bound-comparison table over d.
//
// Each sweep row for d in {2,3} also carries the two-sided enclosure
//   n^2 lambda_min(graph) / d^2  <=  h_{n,d}  <=  n^2 (1 - v_K' M_est v_K),
// i.e. the Dirichlet-graph lower bound and the variational upper bound from
// the polynomial test vector.

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "estfid/dirichlet_graph.hpp"
#include "estfid/errors.hpp"
#include "estfid/estimation.hpp"
#include "estfid/kahn_bound.hpp"
#include "estfid/parallel.hpp"

namespace estfid {

struct sweep_row {
  int n = 0;
  std::size_t dim = 0;
  double f_est = 0.0;
  double h_nd = 0.0;
  double residual = 0.0;
  std::optional<double> lambda_graph;      // min eigenvalue of the Dirichlet graph Laplacian
  std::optional<double> sandwich_lower;    // n^2 lambda_graph / d^2
  std::optional<double> variational_upper; // n^2 (1 - v_K' M_est v_K); empty below threshold n
  std::optional<std::string> error;        // solver failure note; numeric fields invalid
};

struct sweep_series {
  int d = 0;
  std::vector<sweep_row> rows;
};

/// One sweep row: eigenvalue of M_est plus, for d in {2,3}, both sandwich
/// sides.  Failures are captured in the row instead of thrown so a sweep can
/// continue past a bad n.
inline sweep_row compute_sweep_row(int n, int d, double tol = default_eig_tol,
                                   std::size_t max_diagrams = default_max_diagrams) {
  sweep_row row;
  row.n = n;
  try {
    estimation_matrix est = build_m_est(n, d, max_diagrams);
    row.dim = est.lattice.size();
    eig_result top = extremal_eig(est.matrix, extremal_side::largest, tol);
    const double nn = static_cast<double>(n) * n;
    row.f_est = top.value;
    row.h_nd = nn * (1.0 - top.value);
    row.residual = top.residual;
    if (d == 2 || d == 3) {
      const double lam = lambda_min_graph(n, d, tol, max_diagrams);
      row.lambda_graph = lam;
      row.sandwich_lower = nn * lam / (static_cast<double>(d) * d);
      try {
        std::vector<double> vk = kahn_test_vector(est.lattice);
        row.variational_upper = nn * (1.0 - variational_fidelity(est, vk));
      } catch (const zero_test_vector_error&) {
        // below the threshold weight the polynomial test vector vanishes
      }
    }
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

/// Sweeps h_{n,d} over the given n values; rows are independent and computed
/// in parallel, and per-row failures are recorded without aborting the sweep.
inline sweep_series sweep(int d, const std::vector<int>& n_values,
                          double tol = default_eig_tol,
                          std::size_t max_diagrams = default_max_diagrams, int threads = 0) {
  if (d < 2) throw dimension_error("sweep: need d >= 2");
  sweep_series out;
  out.d = d;
  out.rows.resize(n_values.size());
  parallel_for(n_values.size(), threads, [&](std::size_t i) {
    out.rows[i] = compute_sweep_row(n_values[i], d, tol, max_diagrams);
  });
  return out;
}

struct fit_window {
  int n_lo = 0;
  int n_hi = 0;
};

struct extrapolation_result {
  double h_infinity = 0.0;
  std::vector<double> coefficients;  // c1 (1/n), then c2 (1/n^2) when fitted
  double ci = 0.0;                   // standard error of the intercept
  std::size_t rows_used = 0;
};

/// Least-squares fit of h_{n,d} = h_inf + c1/n (+ c2/n^2) over the rows whose
/// n lies in the window; `terms` counts the fitted coefficients including the
/// intercept (2 or 3).  Returns the intercept and its standard error from the
/// fit covariance (zero when the fit interpolates exactly).
inline extrapolation_result extrapolate(const sweep_series& series, fit_window window,
                                        int terms = 3) {
  if (terms != 2 && terms != 3) {
    throw dimension_error("extrapolate: terms must be 2 (h+c1/n) or 3 (h+c1/n+c2/n^2)");
  }
  std::vector<const sweep_row*> rows;
  for (const auto& r : series.rows) {
    if (!r.error && r.n >= window.n_lo && r.n <= window.n_hi) rows.push_back(&r);
  }
  const std::size_t m = rows.size();
  const std::size_t p = static_cast<std::size_t>(terms);
  if (m < 3 || m < p) {
    throw dimension_error("extrapolate: window holds " + std::to_string(m) +
                          " usable rows; need at least " + std::to_string(std::max<std::size_t>(3, p)));
  }
  Eigen::MatrixXd x(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p));
  Eigen::VectorXd y(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const double inv = 1.0 / rows[i]->n;
    x(static_cast<Eigen::Index>(i), 0) = 1.0;
    x(static_cast<Eigen::Index>(i), 1) = inv;
    if (p == 3) x(static_cast<Eigen::Index>(i), 2) = inv * inv;
    y(static_cast<Eigen::Index>(i)) = rows[i]->h_nd;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < static_cast<Eigen::Index>(p)) {
    throw ill_conditioned_fit_error("extrapolate: n values too clustered for a rank-" +
                                    std::to_string(p) + " fit");
  }
  Eigen::VectorXd beta = qr.solve(y);
  Eigen::VectorXd resid = y - x * beta;
  extrapolation_result out;
  out.h_infinity = beta(0);
  for (std::size_t j = 1; j < p; ++j) out.coefficients.push_back(beta(static_cast<Eigen::Index>(j)));
  out.rows_used = m;
  if (m > p) {
    const double s2 = resid.squaredNorm() / static_cast<double>(m - p);
    Eigen::MatrixXd xtx_inv = (x.transpose() * x).ldlt().solve(
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(p)));
    const double var = s2 * xtx_inv(0, 0);
    out.ci = var > 0.0 ? std::sqrt(var) : 0.0;
  }
  return out;
}

struct bounds_row {
  int d = 0;
  double christandl_lo = 0.0;   // (d^2-1)/16
  double christandl_hi = 0.0;   // d^5/(4 sqrt 2)
  double yang_hi = 0.0;         // 18 pi^2 d^4          (leading asymptotic term)
  double haah_lo = 0.0;         // alpha (d^2-beta^2)^2
  double kahn_hi = 0.0;         // (d+1)(d-1)(3d-2)(3d-1)/6
  double conjecture_lo = 0.0;   // pi d^4 / (8 e^3)
  std::optional<double> exact;  // known limits: pi^2 (d=2), 56 pi^2/9 (d=3)
};

/// alpha = ((25 - ln 2) / (20000 (pi/100 + ln 2)))^2, about 2.81e-6.
inline double haah_alpha() {
  const double t = std::numbers::pi / 100.0 + std::numbers::ln2;
  const double r = (25.0 - std::numbers::ln2) / (20000.0 * t);
  return r * r;
}

/// beta = sqrt(50 (pi/100 + ln 2) / (25 - ln 2)), about 1.22.
inline double haah_beta() {
  const double t = std::numbers::pi / 100.0 + std::numbers::ln2;
  return std::sqrt(50.0 * t / (25.0 - std::numbers::ln2));
}

/// Closed-form comparison table of the known bounds on the asymptotic
/// deficiency h(d); only the leading terms of the cited asymptotics are
/// tabulated.
inline std::vector<bounds_row> bounds_table(const std::vector<int>& d_list) {
  const double pi = std::numbers::pi;
  const double alpha = haah_alpha();
  const double beta = haah_beta();
  const double e3 = std::exp(3.0);
  std::vector<bounds_row> rows;
  rows.reserve(d_list.size());
  for (int d : d_list) {
    if (d < 2) throw dimension_error("bounds_table: need d >= 2");
    const double dd = d;
    bounds_row r;
    r.d = d;
    r.christandl_lo = (dd * dd - 1.0) / 16.0;
    r.christandl_hi = std::pow(dd, 5) / (4.0 * std::numbers::sqrt2);
    r.yang_hi = 18.0 * pi * pi * std::pow(dd, 4);
    const double shifted = dd * dd - beta * beta;
    r.haah_lo = alpha * shifted * shifted;
    r.kahn_hi = static_cast<double>(h_upper(d));
    r.conjecture_lo = pi * std::pow(dd, 4) / (8.0 * e3);
    if (d == 2) r.exact = pi * pi;
    if (d == 3) r.exact = 56.0 * pi * pi / 9.0;
    rows.push_back(r);
  }
  return rows;
}

}  // namespace estfid
