#pragma once

// Degeneracy values of the central mass.
//
// For 2 <= l <= n/2, det A_l(m) = a_l + slope_l m is affine in m and has at
// most one positive root m_l*. For l = 1, det A_1(m) = -I0 m p(m) with
// p(m) = b_n m^2 + c_n m + d_n; the positive roots of p are the mode-1 values.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ngon/geometry.hpp"
#include "ngon/hessian.hpp"
#include "ngon/spectral.hpp"

namespace ngon {

struct ModeDegeneracy {
  int l = 0;
  double a_l = 0.0;    // det A_l at m = 0
  double slope = 0.0;  // 3 I0 (Ue0/I0 + I0 U'_l2)
  double beta_l = 0.0;
  std::optional<double> m_star;
  bool condition_met = false;       // a_l (Ue0/I0 + I0 U'_l2) < 0
  bool degenerate_in_m = false;     // slope vanished; no root reported
};

inline ModeDegeneracy mode_degeneracy(const GeometryCache& geo,
                                      const ModeCoefficients& c) {
  if (c.l < 2 || c.l > geo.n / 2) {
    throw std::invalid_argument("mode_degeneracy needs 2 <= l <= n/2");
  }
  const double I0 = geo.I0;
  const double x = geo.Ue0 / I0 + I0 * c.u_l1;
  const double y = geo.Ue0 / I0 + I0 * c.up_l2;
  ModeDegeneracy out;
  out.l = c.l;
  // U'_l1 U_l2 = (i up_l1_im)(i u_l2_im) = -up_l1_im u_l2_im
  out.a_l = x * y + I0 * I0 * c.up_l1_im * c.u_l2_im;
  out.slope = 3.0 * I0 * y;
  const double half = 0.5 * geo.d0;
  out.beta_l = 4.0 / (geo.d0 * geo.d0) *
               ((half + c.u_l1) * (half + c.up_l2) + c.up_l1_im * c.u_l2_im);
  out.condition_met = out.a_l * y < 0.0;
  if (std::abs(out.slope) < 1e-12) {
    out.degenerate_in_m = true;
  } else if (out.condition_met) {
    out.m_star = -out.a_l / out.slope;
  }
  return out;
}

struct QuadraticCoefficients {
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;

  double operator()(double m) const { return (b * m + c) * m + d; }
};

inline QuadraticCoefficients mode1_closed_form(const GeometryCache& geo,
                                               const ModeCoefficients& c1) {
  const double I0 = geo.I0;
  const double I2 = I0 * I0;
  const double Ue = geo.Ue0;
  const double U11 = c1.u_l1;
  QuadraticCoefficients q;
  q.b = 3.0 * I0 * (I0 * I2 / 2.0 - Ue / I0 - I0 * U11);
  q.c = I2 * Ue - 4.0 * Ue * Ue / I2 - I2 * I2 * U11 - 5.0 * Ue * U11;
  q.d = -(I2 / 2.0 + Ue / I2) * (Ue * Ue / I2 + 2.0 * Ue * U11);
  return q;
}

/// Quadratic through the reduced mode-1 determinant at m = 0, 1, 2.
inline QuadraticCoefficients mode1_interpolated(const GeometryCache& geo,
                                                const ModeCoefficients& c1) {
  const double p0 = mode1_reduced_determinant(geo, c1, 0.0);
  const double p1 = mode1_reduced_determinant(geo, c1, 1.0);
  const double p2 = mode1_reduced_determinant(geo, c1, 2.0);
  QuadraticCoefficients q;
  q.d = p0;
  q.b = 0.5 * (p2 - 2.0 * p1 + p0);
  q.c = p1 - p0 - q.b;
  return q;
}

/// Real roots of b x^2 + c x + d, ascending, via q = -(c + sign(c) sqrt(D))/2.
inline std::vector<double> stable_quadratic_roots(double b, double c,
                                                  double d) {
  std::vector<double> roots;
  if (b == 0.0) {
    if (c != 0.0) roots.push_back(-d / c);
    return roots;
  }
  const double disc = c * c - 4.0 * b * d;
  if (disc < 0.0) return roots;
  const double q = -0.5 * (c + std::copysign(std::sqrt(disc), c));
  if (q == 0.0) {
    roots.push_back(0.0);
    roots.push_back(0.0);
    return roots;
  }
  roots.push_back(q / b);
  roots.push_back(d / q);
  std::sort(roots.begin(), roots.end());
  return roots;
}

constexpr double kCoefficientTol = 1e-8;

struct Mode1Degeneracy {
  QuadraticCoefficients closed;
  QuadraticCoefficients interpolated;
  double max_relative_mismatch = 0.0;
  std::vector<double> roots;
  std::vector<double> positive_roots;
};

inline double relative_mismatch(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline Mode1Degeneracy mode1_degeneracy(const GeometryCache& geo,
                                        const ModeCoefficients& c1,
                                        double tol = kCoefficientTol) {
  if (c1.l != 1) throw std::invalid_argument("mode1_degeneracy needs l = 1");
  Mode1Degeneracy out;
  out.closed = mode1_closed_form(geo, c1);
  out.interpolated = mode1_interpolated(geo, c1);
  out.max_relative_mismatch =
      std::max({relative_mismatch(out.closed.b, out.interpolated.b),
                relative_mismatch(out.closed.c, out.interpolated.c),
                relative_mismatch(out.closed.d, out.interpolated.d)});
  if (out.max_relative_mismatch > tol) {
    throw ConsistencyError("mode-1 quadratic: closed form and interpolation "
                           "disagree");
  }
  out.roots = stable_quadratic_roots(out.closed.b, out.closed.c, out.closed.d);
  for (double r : out.roots) {
    if (r > 0.0) out.positive_roots.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Whole-configuration report

struct CriticalValue {
  int mode = 0;
  double m = 0.0;
};

constexpr double kDistinctTol = 1e-9;

struct DegeneracyReport {
  int n = 0;
  std::vector<ModeDegeneracy> modes;   // l = 2..n/2
  Mode1Degeneracy mode1;
  std::vector<CriticalValue> critical;  // every root, sorted by m
  std::vector<double> all_m_star;       // sorted, deduplicated
  int count = 0;
  int collisions = 0;  // roots merged by deduplication
};

/// Number of distinct degeneracy values by regime of n.
inline int table_prediction(int n) {
  if (n < 3) throw std::invalid_argument("n must be at least 3");
  if (n == 3) return 1;
  if (n <= 6) return n / 2 - 1;
  if (n <= 9) return n / 2 - 2;
  return n / 2 - 1;
}

inline DegeneracyReport degeneracy_report(int n) {
  const auto geo = geometry_cache(build_config(n, 0.0));
  DegeneracyReport report;
  report.n = n;
  for (int l = 2; l <= n / 2; ++l) {
    report.modes.push_back(mode_degeneracy(geo, mode_coefficients(geo, l)));
    if (report.modes.back().m_star) {
      report.critical.push_back({l, *report.modes.back().m_star});
    }
  }
  report.mode1 = mode1_degeneracy(geo, mode_coefficients(geo, 1));
  for (double r : report.mode1.positive_roots) report.critical.push_back({1, r});
  std::sort(report.critical.begin(), report.critical.end(),
            [](const CriticalValue& a, const CriticalValue& b) { return a.m < b.m; });
  for (const auto& cv : report.critical) {
    if (!report.all_m_star.empty() &&
        std::abs(cv.m - report.all_m_star.back()) <= kDistinctTol) {
      ++report.collisions;
      continue;
    }
    report.all_m_star.push_back(cv.m);
  }
  report.count = static_cast<int>(report.all_m_star.size());
  return report;
}

struct TableRow {
  int n = 0;
  int count = 0;
  int predicted = 0;
  bool match = false;
};

inline std::vector<TableRow> count_table(int n_min, int n_max) {
  if (n_min < 3 || n_max < n_min) {
    throw std::invalid_argument("count table needs 3 <= n_min <= n_max");
  }
  std::vector<TableRow> rows;
  for (int n = n_min; n <= n_max; ++n) {
    const int count = degeneracy_report(n).count;
    const int predicted = table_prediction(n);
    rows.push_back({n, count, predicted, count == predicted});
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Oracle confirmation of a degeneracy value

struct KernelVerification {
  int n = 0;
  CriticalValue value;
  int expected_growth = 0;  // extra kernel dimension the blocks predict
  double m_below = 0.0;
  double m_above = 0.0;
  int kernel_at = 0;
  int kernel_below = 0;
  int kernel_above = 0;
  int negatives_below = 0;
  int negatives_above = 0;
  bool passed = false;
};

/// Extra kernel the blocks predict at a root of mode l: A_l and its twin B_l
/// for 1 <= l < n/2, a single scalar mode for l = n/2.
inline int expected_kernel_growth(int n, int mode) {
  return 2 * mode == n ? 1 : 2;
}

/// Full-Hessian spectrum at m*, m* - offset and m* + offset. When m* is
/// smaller than the offset the lower probe is m*/2.
inline KernelVerification verify_degeneracy(int n, const CriticalValue& value,
                                            double kernel_tol = 1e-9,
                                            double offset = 0.05) {
  KernelVerification out;
  out.n = n;
  out.value = value;
  out.expected_growth = expected_kernel_growth(n, value.mode);
  out.m_below = value.m > offset ? value.m - offset : 0.5 * value.m;
  out.m_above = value.m + offset;
  auto probe = [&](double m, int& kernel, int* negatives) {
    const auto cfg = build_config(n, m);
    const auto geo = geometry_cache(cfg);
    const auto spec = spectrum_report(assemble_terms(cfg, geo).H, kernel_tol);
    kernel = spec.kernel_dim;
    if (negatives) {
      *negatives = static_cast<int>(std::count_if(
          spec.eigenvalues.begin(), spec.eigenvalues.end(),
          [&](double x) { return x < -kernel_tol; }));
    }
  };
  probe(value.m, out.kernel_at, nullptr);
  probe(out.m_below, out.kernel_below, &out.negatives_below);
  probe(out.m_above, out.kernel_above, &out.negatives_above);
  const int trivial = 2;
  out.passed = out.kernel_at - trivial >= out.expected_growth &&
               out.kernel_below == trivial && out.kernel_above == trivial &&
               std::abs(out.negatives_above - out.negatives_below) ==
                   out.expected_growth;
  return out;
}

}  // namespace ngon
