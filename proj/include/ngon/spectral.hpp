#pragma once

// Closed-form Hessian blocks of f = sqrt(2I) U at the central + regular
// n-gon, as functions of the central mass m.
//
// Blocks are written in the unnormalised bases {v_l, v_l'} (l >= 2) and
// {v_1, v_1', e_{2n+1}} (l = 1); the (w', w) sectors carry identical blocks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ngon/geometry.hpp"
#include "ngon/representation.hpp"

namespace ngon {

/// Fourier sums of the polygon potential Hessian for one mode. The two sums
/// that carry a factor i are stored through their imaginary parts.
struct ModeCoefficients {
  int l = 0;
  double u_l1 = 0.0;
  double u_l2_im = 0.0;
  double up_l1_im = 0.0;
  double up_l2 = 0.0;
};

inline ModeCoefficients mode_coefficients(const GeometryCache& geo, int l) {
  if (l < 1 || l > geo.n / 2) {
    throw std::invalid_argument("mode " + std::to_string(l) + " outside 1.." +
                                std::to_string(geo.n / 2));
  }
  ModeCoefficients c;
  c.l = l;
  for (int k = 1; k < geo.n; ++k) {
    const double d = geo.distance(geo.n, k);
    const double weight = 1.0 / (2.0 * d * d * d);
    const double ck = std::cos(k * geo.theta);
    const double clk = std::cos(l * k * geo.theta);
    const double ss = std::sin(k * geo.theta) * std::sin(l * k * geo.theta);
    c.u_l1 += weight * (1.0 - ck * clk - 3.0 * (ck - clk));
    c.u_l2_im += weight * ss;
    c.up_l1_im -= weight * ss;
    c.up_l2 += weight * (1.0 - ck * clk + 3.0 * (ck - clk));
  }
  return c;
}

/// A_l for 2 <= l <= n/2. The off-diagonal entries -i I0 U'_l1 and
/// i I0 U_l2 are real and equal.
inline Eigen::Matrix2d block_2x2(const GeometryCache& geo,
                                 const ModeCoefficients& c, double m) {
  if (c.l < 2) throw std::invalid_argument("block_2x2 needs mode l >= 2");
  const double I0 = geo.I0;
  const double base = geo.potential_at(m) / I0;
  Eigen::Matrix2d A;
  A << base + I0 * (c.u_l1 + 2.0 * m), I0 * c.up_l1_im,
      -I0 * c.u_l2_im, base + I0 * (c.up_l2 - m);
  return A;
}

/// A_1 in the basis {v_1, v_1', e_{2n+1}}. The centre row is the
/// e_{2n+1}-component of H v_1 and H v_1' (|v_1|^2 = |v_1'|^2 = n/2).
inline Eigen::Matrix3d block_3x3(const GeometryCache& geo,
                                 const ModeCoefficients& c, double m) {
  if (c.l != 1) throw std::invalid_argument("block_3x3 needs mode l = 1");
  if (m < 0.0) throw std::invalid_argument("central mass must be >= 0");
  const double I0 = geo.I0;
  const double n = geo.n;
  const double U0 = geo.potential_at(m);
  Eigen::Matrix3d A;
  A << U0 / I0 + I0 * (c.u_l1 + 2.0 * m), I0 * c.up_l1_im, -2.0 * I0 * m,
      -I0 * c.u_l2_im, U0 / I0 + I0 * (c.up_l2 - m), I0 * m,
      -I0 * n * m, 0.5 * I0 * n * m, U0 * m / I0 + 0.5 * I0 * n * m;
  return A;
}

/// A_1 with its third column divided by m, so det A_1 = m det(reduced).
/// Well defined at m = 0.
inline Eigen::Matrix3d reduced_block_3x3(const GeometryCache& geo,
                                         const ModeCoefficients& c, double m) {
  if (c.l != 1) throw std::invalid_argument("reduced block needs mode l = 1");
  const double I0 = geo.I0;
  const double n = geo.n;
  const double U0 = geo.potential_at(m);
  Eigen::Matrix3d A;
  A << U0 / I0 + I0 * (c.u_l1 + 2.0 * m), I0 * c.up_l1_im, -2.0 * I0,
      -I0 * c.u_l2_im, U0 / I0 + I0 * (c.up_l2 - m), I0,
      -I0 * n * m, 0.5 * I0 * n * m, U0 / I0 + 0.5 * I0 * n;
  return A;
}

/// The quadratic p(m) with det A_1(m) = -I0 m p(m); its positive roots are
/// the mode-1 degeneracy values.
inline double mode1_reduced_determinant(const GeometryCache& geo,
                                        const ModeCoefficients& c, double m) {
  return -reduced_block_3x3(geo, c, m).determinant() / geo.I0;
}

// ---------------------------------------------------------------------------
// Small-matrix eigenvalues from characteristic polynomials

inline std::array<double, 2> eigenvalues_2x2(const Eigen::Matrix2d& A) {
  const double half_trace = 0.5 * (A(0, 0) + A(1, 1));
  const double half_gap = 0.5 * (A(0, 0) - A(1, 1));
  const double disc = half_gap * half_gap + A(0, 1) * A(1, 0);
  if (disc < -1e-12 * (1.0 + half_trace * half_trace)) {
    throw ConsistencyError("2x2 block has complex eigenvalues");
  }
  const double root = std::sqrt(std::max(disc, 0.0));
  return {half_trace - root, half_trace + root};
}

/// Real eigenvalues of a 3x3 matrix similar to a symmetric one (trigonometric
/// solution of the characteristic cubic, then one Newton step per root).
inline std::array<double, 3> eigenvalues_3x3(const Eigen::Matrix3d& A) {
  // lambda^3 + a lambda^2 + b lambda + c
  const double a = -A.trace();
  const double b = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) +
                   A(0, 0) * A(2, 2) - A(0, 2) * A(2, 0) +
                   A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
  const double c = -A.determinant();
  const double p = b - a * a / 3.0;
  const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
  const double shift = -a / 3.0;
  std::array<double, 3> roots{shift, shift, shift};
  const double scale = std::max({1.0, std::abs(a), std::sqrt(std::abs(b))});
  if (p < -1e-14 * scale * scale) {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * r);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) {
      roots[k] = shift + r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0);
    }
  } else if (std::abs(q) > 1e-12 * scale * scale * scale) {
    throw ConsistencyError("3x3 block has complex eigenvalues");
  }
  for (auto& x : roots) {
    const double f = ((x + a) * x + b) * x + c;
    const double df = (3.0 * x + 2.0 * a) * x + b;
    if (std::abs(df) > 1e-8 * scale * scale) x -= f / df;
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// Scalar blocks and the full block set

struct ScalarBlock {
  std::string label;
  double value = 0.0;
};

/// dilation and rotation (always 0); for even n also the phi3/phi4 modes
/// v_{n/2}, w_{n/2}, which are the diagonal entries of A_{n/2}.
inline std::vector<ScalarBlock> scalar_blocks(const GeometryCache& geo,
                                              double m) {
  std::vector<ScalarBlock> out{{"dilation", 0.0}, {"rotation", 0.0}};
  if (geo.n % 2 == 0) {
    const auto A = block_2x2(geo, mode_coefficients(geo, geo.n / 2), m);
    out.push_back({"phi3", A(0, 0)});
    out.push_back({"phi4", A(1, 1)});
  }
  return out;
}

struct BlockSet {
  double m = 0.0;
  std::vector<ScalarBlock> scalar_eigs;
  std::map<int, Eigen::Matrix2d> A;  // 2 <= l <= n/2
  Eigen::Matrix3d A1;
};

inline BlockSet assemble_blocks(const GeometryCache& geo, double m) {
  BlockSet set;
  set.m = m;
  set.scalar_eigs = scalar_blocks(geo, m);
  for (int l = 2; l <= geo.n / 2; ++l) {
    set.A[l] = block_2x2(geo, mode_coefficients(geo, l), m);
  }
  set.A1 = block_3x3(geo, mode_coefficients(geo, 1), m);
  return set;
}

/// Sorted multiset of Hessian eigenvalues predicted by the blocks: scalar
/// modes once, A_1 and A_l (l < n/2) twice. For even n the l = n/2 mode is
/// already represented by the phi3/phi4 scalars.
inline std::vector<double> block_spectrum(const BlockSet& set, int n) {
  std::vector<double> out;
  for (const auto& s : set.scalar_eigs) out.push_back(s.value);
  for (double x : eigenvalues_3x3(set.A1)) out.insert(out.end(), 2, x);
  for (const auto& [l, A] : set.A) {
    if (2 * l == n) continue;
    for (double x : eigenvalues_2x2(A)) out.insert(out.end(), 2, x);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// h-coefficients read off a full Hessian

struct HCoefficients {
  int l = 0;
  std::complex<double> h1, h2;    // H v1 = h1 v1 + h2 v2
  std::complex<double> hp1, hp2;  // H v2 = hp1 v1 + hp2 v2
  double residual = 0.0;          // relative expansion residual
};

/// Discrete Fourier sums over the n-th block row of H; fails if H v1, H v2
/// leave span{v1, v2}.
inline HCoefficients h_coefficients(const Eigen::MatrixXd& H,
                                    const PolygonConfig& cfg, int l,
                                    double tol = 1e-10) {
  if (l < 2 || l > cfg.n / 2) {
    throw std::invalid_argument("h-coefficients need 2 <= l <= n/2");
  }
  using cd = std::complex<double>;
  Eigen::Vector2cd first = Eigen::Vector2cd::Zero();
  Eigen::Vector2cd second = Eigen::Vector2cd::Zero();
  const int row = PolygonConfig::offset(cfg.n);
  for (int k = 1; k <= cfg.n; ++k) {
    const Eigen::Matrix2d cell =
        H.block<2, 2>(row, PolygonConfig::offset(k));
    const double phase = -l * k * cfg.theta;
    const cd e(std::cos(phase), std::sin(phase));
    const double c = std::cos(k * cfg.theta);
    const double s = std::sin(k * cfg.theta);
    first += e * (cell * Eigen::Vector2d(c, s)).cast<cd>();
    second += e * (cell * Eigen::Vector2d(-s, c)).cast<cd>();
  }
  HCoefficients hc{l, first[0], first[1], second[0], second[1], 0.0};
  const auto f = fourier_vectors(cfg, l);
  const Eigen::MatrixXcd Hc = H.cast<cd>();
  const Eigen::VectorXcd r1 = Hc * f.v1 - hc.h1 * f.v1 - hc.h2 * f.v2;
  const Eigen::VectorXcd r2 = Hc * f.v2 - hc.hp1 * f.v1 - hc.hp2 * f.v2;
  const double scale = std::max(1.0, H.norm());
  hc.residual = std::max(r1.norm(), r2.norm()) / scale;
  if (hc.residual > tol) {
    throw ConsistencyError("mode " + std::to_string(l) +
                           " is not invariant under the Hessian");
  }
  return hc;
}

/// [[h1, -i h1'], [i h2, h2']] resolved to a real matrix.
inline Eigen::Matrix2d block_from_h(const HCoefficients& hc,
                                    double tol = 1e-9) {
  using cd = std::complex<double>;
  const cd i(0.0, 1.0);
  const cd entries[4] = {hc.h1, -i * hc.hp1, i * hc.h2, hc.hp2};
  double scale = 1.0;
  for (const auto& e : entries) scale = std::max(scale, std::abs(e));
  for (const auto& e : entries) {
    if (std::abs(e.imag()) > tol * scale) {
      throw ConsistencyError("block assembled from h-coefficients is not real");
    }
  }
  Eigen::Matrix2d A;
  A << entries[0].real(), entries[1].real(), entries[2].real(),
      entries[3].real();
  return A;
}

}  // namespace ngon
