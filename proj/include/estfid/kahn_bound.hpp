#pragma once

// Analytic upper bound on the asymptotic estimation deficiency, obtained from
// the Rayleigh quotient of the Dirichlet energy against the polynomial trial
// function u(x) = x_d * prod_i (x_i - x_{i+1}) on the ordered simplex.
//
// Everything reduces to four moment integrals of u over the scaled simplex
//   S = { y >= 0 : sum_i i*y_i = 1 },   y_i = x_i - x_{i+1}  (y_d = x_d),
// where u = prod_i y_i.  With p_i = prod_{j != i} y_j the four integrals are
//   A = int sum_i p_i^2,   B = int sum_{i>=2} p_i p_{i-1},
//   C = int p_d^2,         D = int prod_i y_i^2,
// and the bound is h <= (2d(A-B) - (d+1)C) / (d^2 D).  The ratios A/D, B/D,
// C/D are rational; we provide independent closed forms and recursions in
// exact rational arithmetic, plus a Monte Carlo estimator of the same ratios
// for cross-validation.

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "estfid/errors.hpp"
#include "estfid/parallel.hpp"
#include "estfid/rng.hpp"

namespace estfid {

using big_int = boost::multiprecision::cpp_int;
using big_rational = boost::multiprecision::cpp_rational;

/// Exact moment data for dimension d.  The three ratios are taken against the
/// normalization integral D; D itself is recorded through its coefficient in
/// front of sqrt(5), i.e. D = d_sqrt5_coefficient * sqrt(5).
struct kahn_ratios {
  int d = 0;
  big_rational a_ratio;              // A / D
  big_rational b_ratio;              // B / D
  big_rational c_ratio;              // C / D
  big_rational d_sqrt5_coefficient;  // D / sqrt(5)
};

namespace detail {

inline big_int factorial(int k) {
  big_int f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

inline void require_dimension_at_least_two(int d) {
  if (d < 2) throw dimension_error("moment ratios require d >= 2");
}

}  // namespace detail

/// Product closed forms for the moment ratios, valid for every d >= 2:
///   A/D = d(d+1)(2d+1)(3d-1)(3d-2)/12,
///   B/D = d(d-1)(d+1)(3d-1)(3d-2)/12,
///   C/D = d^2(3d-2)(3d-1)/2,
///   D   = 2^d / ((d!)^3 (3d-1)!) * sqrt(5).
inline kahn_ratios ratios_closed_form(int d) {
  detail::require_dimension_at_least_two(d);
  const big_int bd = d;
  kahn_ratios r;
  r.d = d;
  r.a_ratio = big_rational(bd * (bd + 1) * (2 * bd + 1) * (3 * bd - 1) * (3 * bd - 2), 12);
  r.b_ratio = big_rational(bd * (bd - 1) * (bd + 1) * (3 * bd - 1) * (3 * bd - 2), 12);
  r.c_ratio = big_rational(bd * bd * (3 * bd - 2) * (3 * bd - 1), 2);
  big_int den = detail::factorial(d);
  den = den * den * den * detail::factorial(3 * d - 1);
  r.d_sqrt5_coefficient = big_rational(big_int(1) << d, den);
  return r;
}

/// Same ratios computed by the dimensional reduction recursions
///   D_d = 2 D_{d-1} / (d^3 (3d-3)(3d-2)(3d-1)),
///   C_d = D_{d-1} / (d (3d-3)),
///   A_d = 2 A_{d-1} / (d^3 (3d-5)(3d-4)(3d-3)) + C_d,
///   B_d = 2 B_{d-1} / (d^3 (3d-5)(3d-4)(3d-3))
///         + D_{d-2} / (d^2 (d-1)^2 (3d-6)(3d-5)(3d-4)(3d-3))   (d >= 4),
/// anchored at A_2 = 5/24, B_2 = 1/24, B_3 = 1/9720, C_2 = 1/6, D_2 = 1/240
/// (all in units of sqrt(5)).  Agreement with ratios_closed_form over a range
/// of d is a nontrivial consistency check of both derivations.
inline kahn_ratios ratios_recursive(int d, int cap = 50) {
  detail::require_dimension_at_least_two(d);
  if (d > cap)
    throw capacity_error("recursion ladder capped at d = " + std::to_string(cap) +
                         "; requested d = " + std::to_string(d));
  // Values carried in units of sqrt(5); the sqrt(5) factor cancels in ratios.
  big_rational a(5, 24), b(1, 24), c(1, 6);
  std::vector<big_rational> d_hist;  // d_hist[k] = D_{k+2}
  d_hist.emplace_back(1, 240);
  for (int t = 3; t <= d; ++t) {
    const big_int bt = t;
    const big_rational d_prev = d_hist.back();
    c = d_prev / big_rational(bt * (3 * bt - 3));
    const big_rational shrink(2, bt * bt * bt * (3 * bt - 5) * (3 * bt - 4) * (3 * bt - 3));
    a = shrink * a + c;
    if (t == 3) {
      b = big_rational(1, 9720);
    } else {
      const big_rational& d_prev2 = d_hist[d_hist.size() - 2];
      b = shrink * b +
          d_prev2 / big_rational(bt * bt * (bt - 1) * (bt - 1) * (3 * bt - 6) *
                                 (3 * bt - 5) * (3 * bt - 4) * (3 * bt - 3));
    }
    d_hist.push_back(d_prev * big_rational(2, bt * bt * bt * (3 * bt - 3) * (3 * bt - 2) * (3 * bt - 1)));
  }
  kahn_ratios r;
  r.d = d;
  const big_rational& dd = d_hist.back();
  r.a_ratio = a / dd;
  r.b_ratio = b / dd;
  r.c_ratio = c / dd;
  r.d_sqrt5_coefficient = dd;
  return r;
}

/// Rayleigh quotient of the trial function: (2d(A-B) - (d+1)C) / (d D).
inline big_rational rayleigh_kahn(int d) {
  const kahn_ratios r = ratios_closed_form(d);
  return (2 * big_rational(d) * (r.a_ratio - r.b_ratio) - big_rational(d + 1) * r.c_ratio) /
         big_rational(d);
}

/// The resulting bound on the scaled deficiency h = lim n^2 (1 - F_est):
/// h <= (d+1)(d-1)(3d-2)(3d-1)/6, which equals rayleigh_kahn(d) / d.
inline big_rational h_upper(int d) {
  detail::require_dimension_at_least_two(d);
  const big_int bd = d;
  return big_rational((bd + 1) * (bd - 1) * (3 * bd - 2) * (3 * bd - 1), 6);
}

/// Trial function u(x) = x_d * prod_{i<d} (x_i - x_{i+1}) evaluated at a point
/// of the ordered simplex (x_1 >= ... >= x_d >= 0 is not enforced).
inline double kahn_u(std::span<const double> x) {
  if (x.empty()) throw dimension_error("kahn_u needs at least one coordinate");
  const std::size_t d = x.size();
  double u = x[d - 1];
  for (std::size_t i = 0; i + 1 < d; ++i) u *= x[i] - x[i + 1];
  return u;
}

/// Analytic gradient of kahn_u.  In difference coordinates y_i = x_i - x_{i+1}
/// (y_d = x_d) the function is prod_i y_i, so with partial products
/// p_i = prod_{j != i} y_j one has du/dx_1 = p_1 and du/dx_i = p_i - p_{i-1}.
inline std::vector<double> kahn_u_gradient(std::span<const double> x) {
  if (x.empty()) throw dimension_error("kahn_u_gradient needs at least one coordinate");
  const std::size_t d = x.size();
  std::vector<double> y(d);
  for (std::size_t i = 0; i + 1 < d; ++i) y[i] = x[i] - x[i + 1];
  y[d - 1] = x[d - 1];
  // p[i] = prod_{j != i} y[j] via prefix/suffix products (zero-safe).
  std::vector<double> prefix(d + 1, 1.0), suffix(d + 1, 1.0);
  for (std::size_t i = 0; i < d; ++i) prefix[i + 1] = prefix[i] * y[i];
  for (std::size_t i = d; i-- > 0;) suffix[i] = suffix[i + 1] * y[i];
  std::vector<double> grad(d);
  double prev = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const double p = prefix[i] * suffix[i + 1];
    grad[i] = p - prev;
    prev = p;
  }
  return grad;
}

/// Monte Carlo estimates of the three moment ratios with delta-method
/// standard errors.
struct mc_ratio_result {
  int d = 0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  std::array<double, 3> estimate{};  // A/D, B/D, C/D
  std::array<double, 3> std_error{};
};

namespace detail {

/// Per-batch moment sums; combined sequentially in batch order so the result
/// is independent of thread count.
struct mc_batch_sums {
  double fa = 0, fb = 0, fc = 0, fd = 0;
  double faa = 0, fbb = 0, fcc = 0, fdd = 0;
  double fad = 0, fbd = 0, fcd = 0;
};

constexpr std::uint64_t mc_batch_size = 1u << 16;

/// Draws one uniform point of { y >= 0 : sum_i i*y_i = 1 }: exponential
/// spacings give a uniform point s of the standard simplex, and the linear
/// map y_i = s_i / i carries it onto the scaled simplex (the constant
/// Jacobian cancels in every ratio we form).
inline void sample_scaled_simplex(int d, std::uint64_t seed, std::uint64_t index,
                                  std::span<double> y) {
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    const double u = uniform01(seed, index, static_cast<std::uint64_t>(i));
    const double e = -std::log1p(-u);
    y[i] = e;
    total += e;
  }
  if (total <= 0.0) total = 1.0;  // unreachable in practice; keeps y finite
  for (int i = 0; i < d; ++i) y[i] = y[i] / (total * (i + 1));
}

inline mc_batch_sums mc_run_batch(int d, std::uint64_t seed, std::uint64_t first,
                                  std::uint64_t count) {
  mc_batch_sums s;
  std::vector<double> y(d), prefix(d + 1), suffix(d + 1);
  for (std::uint64_t k = 0; k < count; ++k) {
    sample_scaled_simplex(d, seed, first + k, y);
    prefix[0] = 1.0;
    for (int i = 0; i < d; ++i) prefix[i + 1] = prefix[i] * y[i];
    suffix[d] = 1.0;
    for (int i = d; i-- > 0;) suffix[i] = suffix[i + 1] * y[i];
    double fa = 0.0, fb = 0.0, prev = 0.0;
    for (int i = 0; i < d; ++i) {
      const double p = prefix[i] * suffix[i + 1];
      fa += p * p;
      if (i > 0) fb += p * prev;
      prev = p;
    }
    const double fc = prev * prev;           // p_d^2
    const double full = prefix[d];           // prod y_i
    const double fd = full * full;
    s.fa += fa;
    s.fb += fb;
    s.fc += fc;
    s.fd += fd;
    s.faa += fa * fa;
    s.fbb += fb * fb;
    s.fcc += fc * fc;
    s.fdd += fd * fd;
    s.fad += fa * fd;
    s.fbd += fb * fd;
    s.fcd += fc * fd;
  }
  return s;
}

}  // namespace detail

/// Estimates A/D, B/D, C/D by importance-free Monte Carlo over the scaled
/// simplex.  Fully deterministic for a given (d, samples, seed) regardless of
/// `threads`: work is split into fixed-size batches indexed by sample number
/// and partial sums are reduced in batch order.
inline mc_ratio_result mc_oracle(int d, std::uint64_t samples, std::uint64_t seed,
                                 int threads = 0) {
  detail::require_dimension_at_least_two(d);
  if (samples == 0) throw dimension_error("mc_oracle needs at least one sample");
  const std::uint64_t batches =
      (samples + detail::mc_batch_size - 1) / detail::mc_batch_size;
  std::vector<detail::mc_batch_sums> partial(batches);
  parallel_for(batches, threads, [&](std::size_t b) {
    const std::uint64_t first = static_cast<std::uint64_t>(b) * detail::mc_batch_size;
    const std::uint64_t count = std::min<std::uint64_t>(detail::mc_batch_size, samples - first);
    partial[b] = detail::mc_run_batch(d, seed, first, count);
  });
  detail::mc_batch_sums s;
  for (const auto& p : partial) {
    s.fa += p.fa;
    s.fb += p.fb;
    s.fc += p.fc;
    s.fd += p.fd;
    s.faa += p.faa;
    s.fbb += p.fbb;
    s.fcc += p.fcc;
    s.fdd += p.fdd;
    s.fad += p.fad;
    s.fbd += p.fbd;
    s.fcd += p.fcd;
  }
  const double n = static_cast<double>(samples);
  const double mean_d = s.fd / n;
  mc_ratio_result out;
  out.d = d;
  out.samples = samples;
  out.seed = seed;
  const std::array<double, 3> sums{s.fa, s.fb, s.fc};
  const std::array<double, 3> sums_sq{s.faa, s.fbb, s.fcc};
  const std::array<double, 3> sums_cross{s.fad, s.fbd, s.fcd};
  for (int j = 0; j < 3; ++j) {
    const double mean_f = sums[j] / n;
    const double r = mean_f / mean_d;
    out.estimate[j] = r;
    if (samples > 1) {
      // Delta method for the ratio of means: Var(r) ~ (v_ff - 2 r v_fd +
      // r^2 v_dd) / (n mean_d^2) with sample (co)variances v.
      const double denom = n - 1.0;
      const double v_ff = (sums_sq[j] - n * mean_f * mean_f) / denom;
      const double v_dd = (s.fdd - n * mean_d * mean_d) / denom;
      const double v_fd = (sums_cross[j] - n * mean_f * mean_d) / denom;
      const double var = (v_ff - 2.0 * r * v_fd + r * r * v_dd) / (n * mean_d * mean_d);
      out.std_error[j] = var > 0.0 ? std::sqrt(var) : 0.0;
    }
  }
  return out;
}

}  // namespace estfid
