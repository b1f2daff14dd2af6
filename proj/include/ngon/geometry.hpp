#pragma once

// Central + regular n-gon configuration: n unit masses on the unit circle at
// angles k*theta (k = 1..n, theta = 2*pi/n) and a mass m at the origin.
//
// Body indices in the public API are 1-based: vertices 1..n, centre n+1.
// Coordinates are stored as a flat vector of length 2n+2, body k occupying
// entries 2(k-1) and 2(k-1)+1.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ngon {

/// Raised when an internal cross-check between two independent routes fails.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PolygonConfig {
  int n = 0;
  double m = 0.0;
  double theta = 0.0;
  Eigen::VectorXd positions;

  int dimension() const { return 2 * n + 2; }
  int center() const { return n + 1; }

  // 0-based offset of body k (1-based) in a flat coordinate vector.
  static int offset(int k) { return 2 * (k - 1); }

  Eigen::Vector2d body(int k) const {
    return positions.segment<2>(offset(k));
  }

  double mass(int k) const { return k == n + 1 ? m : 1.0; }
};

inline PolygonConfig build_config(int n, double m) {
  if (n < 3) {
    throw std::invalid_argument("vertex count must be at least 3, got " +
                                std::to_string(n));
  }
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw std::invalid_argument("central mass must be a finite value >= 0");
  }
  PolygonConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.theta = 2.0 * std::numbers::pi / n;
  cfg.positions = Eigen::VectorXd::Zero(2 * n + 2);
  for (int k = 1; k <= n; ++k) {
    cfg.positions[PolygonConfig::offset(k)] = std::cos(k * cfg.theta);
    cfg.positions[PolygonConfig::offset(k) + 1] = std::sin(k * cfg.theta);
  }
  return cfg;
}

/// Chord length between vertices k and j of the unit n-gon, 2 sin(|k-j| pi/n).
inline double chord(int n, int k, int j) {
  const int gap = std::abs(k - j);
  return 2.0 * std::sin(gap * std::numbers::pi / n);
}

/// Scalars shared by all block formulas.
///
/// `d` holds the vertex chord matrix (0-based storage, d(k-1, j-1) = d_kj).
/// `d0` is the sum of 1/d_nk over k = 1..n-1, `I0` = sqrt(2 I(z0)) = sqrt(n),
/// `Ue0` the polygon-only potential and `U0` = Ue0 + n m the full potential.
struct GeometryCache {
  int n = 0;
  double m = 0.0;
  double theta = 0.0;
  Eigen::MatrixXd d;
  double d0 = 0.0;
  double I0 = 0.0;
  double Ue0 = 0.0;
  double U0 = 0.0;

  double distance(int k, int j) const { return d(k - 1, j - 1); }

  // Total potential at an arbitrary central mass (blocks are evaluated on
  // m-grids against one cache).
  double potential_at(double mass) const { return Ue0 + n * mass; }
};

inline GeometryCache geometry_cache(const PolygonConfig& cfg) {
  GeometryCache geo;
  geo.n = cfg.n;
  geo.m = cfg.m;
  geo.theta = cfg.theta;
  geo.d = Eigen::MatrixXd::Zero(cfg.n, cfg.n);
  for (int k = 1; k <= cfg.n; ++k) {
    for (int j = 1; j <= cfg.n; ++j) {
      geo.d(k - 1, j - 1) = k == j ? 0.0 : chord(cfg.n, k, j);
    }
  }
  for (int k = 1; k < cfg.n; ++k) geo.d0 += 1.0 / geo.distance(cfg.n, k);
  geo.I0 = std::sqrt(static_cast<double>(cfg.n));
  // Every vertex sees the same multiset of chords.
  geo.Ue0 = 0.5 * cfg.n * geo.d0;
  geo.U0 = geo.potential_at(cfg.m);
  return geo;
}

}  // namespace ngon
