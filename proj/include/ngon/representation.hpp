#pragma once

// The dihedral action on R^{2n+2}, its character bookkeeping and the real
// symmetry-adapted basis that block-diagonalises anything in its commutant.
//
// Convention: the generator r acts on every planar coordinate by R(-theta)
// and moves body k+1 into slot k, so that
//     D(r) v1^{l} = exp(-i l theta) v1^{l}
// for the Fourier vectors below. s is the reflection across the x-axis,
// which fixes vertex n = (1, 0). Under this convention the centre vector in
// the exp(-i theta) eigenspace is e_{2n+1} - i e_{2n+2}.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ngon/geometry.hpp"

namespace ngon {

/// r^rotation s^reflected, rotation in [0, n).
struct GroupElement {
  int rotation = 0;
  bool reflected = false;

  static GroupElement identity() { return {0, false}; }
  static GroupElement r() { return {1, false}; }
  static GroupElement s() { return {0, true}; }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

inline int wrap_index(int k, int n) { return ((k % n) + n) % n; }

// s r^b = r^{-b} s
inline GroupElement compose(const GroupElement& a, const GroupElement& b,
                            int n) {
  const int turn = a.reflected ? -b.rotation : b.rotation;
  return {wrap_index(a.rotation + turn, n), a.reflected != b.reflected};
}

inline GroupElement inverse(const GroupElement& a, int n) {
  if (a.reflected) return a;  // every r^j s is an involution
  return {wrap_index(-a.rotation, n), false};
}

inline std::vector<GroupElement> group_elements(int n) {
  std::vector<GroupElement> out;
  out.reserve(2 * n);
  for (int reflected = 0; reflected < 2; ++reflected) {
    for (int j = 0; j < n; ++j) out.push_back({j, reflected == 1});
  }
  return out;
}

inline Eigen::Matrix2d rotation2(double angle) {
  Eigen::Matrix2d R;
  R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return R;
}

/// Planar part R_a of the action.
inline Eigen::Matrix2d planar_action(int n, const GroupElement& a) {
  const double theta = 2.0 * std::numbers::pi / n;
  Eigen::Matrix2d R = rotation2(-a.rotation * theta);
  if (a.reflected) R = R * Eigen::Vector2d(1.0, -1.0).asDiagonal();
  return R;
}

struct RepMatrix {
  GroupElement element;
  Eigen::MatrixXd entries;
};

/// D(a): slot k receives R_a q_sigma(k), where sigma(k) is found by matching
/// R_a q_j against the vertex list.
inline RepMatrix rep_matrix(const PolygonConfig& cfg, const GroupElement& a) {
  const int n = cfg.n;
  const Eigen::Matrix2d R = planar_action(n, a);
  RepMatrix rep{a, Eigen::MatrixXd::Zero(cfg.dimension(), cfg.dimension())};
  for (int k = 1; k <= n; ++k) {
    int source = 0;
    for (int j = 1; j <= n; ++j) {
      if ((R * cfg.body(j) - cfg.body(k)).norm() < 1e-9) {
        source = j;
        break;
      }
    }
    if (source == 0) {
      throw ConsistencyError("group element does not permute the vertices");
    }
    rep.entries.block<2, 2>(PolygonConfig::offset(k),
                            PolygonConfig::offset(source)) = R;
  }
  const int c = PolygonConfig::offset(cfg.center());
  rep.entries.block<2, 2>(c, c) = R;
  return rep;
}

// ---------------------------------------------------------------------------
// Irreducible representations and characters

struct Irrep {
  enum class Kind { phi1, phi2, phi3, phi4, rho };
  Kind kind = Kind::phi1;
  int k = 0;  // rho index, unused for phi

  int dimension() const { return kind == Kind::rho ? 2 : 1; }

  std::string name() const {
    switch (kind) {
      case Kind::phi1: return "phi1";
      case Kind::phi2: return "phi2";
      case Kind::phi3: return "phi3";
      case Kind::phi4: return "phi4";
      case Kind::rho: return "rho" + std::to_string(k);
    }
    return {};
  }

  friend bool operator==(const Irrep&, const Irrep&) = default;
};

/// phi1, phi2, (phi3, phi4 for even n), rho_1 .. rho_{ceil(n/2)-1}.
inline std::vector<Irrep> irreps(int n) {
  std::vector<Irrep> out{{Irrep::Kind::phi1, 0}, {Irrep::Kind::phi2, 0}};
  if (n % 2 == 0) {
    out.push_back({Irrep::Kind::phi3, 0});
    out.push_back({Irrep::Kind::phi4, 0});
  }
  for (int k = 1; k <= (n - 1) / 2; ++k) out.push_back({Irrep::Kind::rho, k});
  return out;
}

inline double character(const Irrep& irrep, const GroupElement& a, int n) {
  const int j = a.rotation;
  const double sign_j = j % 2 == 0 ? 1.0 : -1.0;
  switch (irrep.kind) {
    case Irrep::Kind::phi1: return 1.0;
    case Irrep::Kind::phi2: return a.reflected ? -1.0 : 1.0;
    case Irrep::Kind::phi3: return sign_j;
    case Irrep::Kind::phi4: return a.reflected ? -sign_j : sign_j;
    case Irrep::Kind::rho: {
      if (a.reflected) return 0.0;
      const double theta = 2.0 * std::numbers::pi / n;
      return 2.0 * std::cos(irrep.k * j * theta);
    }
  }
  return 0.0;
}

/// Multiplicity of each irrep in D via <chi_D, chi_irrep> over the group.
inline std::vector<std::pair<Irrep, int>> isotypic_multiplicities(
    const PolygonConfig& cfg) {
  const auto elements = group_elements(cfg.n);
  std::vector<double> traces;
  traces.reserve(elements.size());
  for (const auto& a : elements) {
    traces.push_back(rep_matrix(cfg, a).entries.trace());
  }
  std::vector<std::pair<Irrep, int>> out;
  for (const auto& irrep : irreps(cfg.n)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      sum += traces[i] * character(irrep, elements[i], cfg.n);
    }
    const double mult = sum / static_cast<double>(elements.size());
    const double rounded = std::round(mult);
    if (std::abs(mult - rounded) > 1e-9) {
      throw ConsistencyError("non-integral multiplicity for " + irrep.name());
    }
    out.emplace_back(irrep, static_cast<int>(rounded));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Fourier vectors

struct FourierPair {
  Eigen::VectorXcd v1;  // vertex k: exp(-i l k theta) (cos k theta, sin k theta)
  Eigen::VectorXcd v2;  // vertex k: exp(-i l k theta) (-sin k theta, cos k theta)
};

inline FourierPair fourier_vectors(const PolygonConfig& cfg, int l) {
  if (l < 0 || l > cfg.n / 2) {
    throw std::invalid_argument("Fourier mode " + std::to_string(l) +
                                " outside 0.." + std::to_string(cfg.n / 2));
  }
  FourierPair pair{Eigen::VectorXcd::Zero(cfg.dimension()),
                   Eigen::VectorXcd::Zero(cfg.dimension())};
  for (int k = 1; k <= cfg.n; ++k) {
    const double phase = -l * k * cfg.theta;
    const std::complex<double> e(std::cos(phase), std::sin(phase));
    const double c = std::cos(k * cfg.theta);
    const double s = std::sin(k * cfg.theta);
    const int o = PolygonConfig::offset(k);
    pair.v1[o] = e * c;
    pair.v1[o + 1] = e * s;
    pair.v2[o] = -e * s;
    pair.v2[o + 1] = e * c;
  }
  return pair;
}

/// Centre direction sharing the exp(-i theta) eigenvalue with v1^{1}, v2^{1}.
inline Eigen::VectorXcd center_mode_vector(const PolygonConfig& cfg) {
  Eigen::VectorXcd eta = Eigen::VectorXcd::Zero(cfg.dimension());
  const int c = PolygonConfig::offset(cfg.center());
  eta[c] = 1.0;
  eta[c + 1] = std::complex<double>(0.0, -1.0);
  return eta;
}

// ---------------------------------------------------------------------------
// Real symmetry-adapted basis

enum class BasisKind { v, v_prime, w, w_prime, center_x, center_y };

inline std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::v: return "v";
    case BasisKind::v_prime: return "v'";
    case BasisKind::w: return "w";
    case BasisKind::w_prime: return "w'";
    case BasisKind::center_x: return "center-x";
    case BasisKind::center_y: return "center-y";
  }
  return {};
}

struct BasisVector {
  int mode = 0;
  BasisKind kind = BasisKind::v;
  Eigen::VectorXd raw;  // before normalisation
};

/// A run of consecutive basis columns spanning one Hessian block: the
/// reflection-parity sector of one Fourier mode. `irrep` is the isotypic
/// component the sector lies in.
struct ModeGroup {
  int mode = 0;
  int parity = 1;  // eigenvalue of D(s) on the sector
  Irrep irrep;
  int first = 0;
  int size = 0;
};

struct SymmetryBasis {
  std::vector<BasisVector> vectors;
  std::vector<ModeGroup> groups;
  Eigen::MatrixXd B;  // orthonormalised columns, same order as `vectors`

  Eigen::MatrixXd raw_columns(const ModeGroup& g) const {
    Eigen::MatrixXd G(vectors.front().raw.size(), g.size);
    for (int i = 0; i < g.size; ++i) G.col(i) = vectors[g.first + i].raw;
    return G;
  }

  Eigen::MatrixXd columns(const ModeGroup& g) const {
    return B.middleCols(g.first, g.size);
  }

  const ModeGroup& group(int mode, int parity) const {
    for (const auto& g : groups) {
      if (g.mode == mode && g.parity == parity) return g;
    }
    throw std::out_of_range("no basis group for mode " + std::to_string(mode));
  }
};

inline SymmetryBasis real_basis(const PolygonConfig& cfg) {
  const int n = cfg.n;
  SymmetryBasis basis;
  auto add_group = [&](int mode, int parity, Irrep irrep,
                       std::vector<std::pair<BasisKind, Eigen::VectorXd>>
                           members) {
    ModeGroup g{mode, parity, irrep, static_cast<int>(basis.vectors.size()),
                static_cast<int>(members.size())};
    for (auto& [kind, vec] : members) {
      basis.vectors.push_back({mode, kind, std::move(vec)});
    }
    basis.groups.push_back(g);
  };
  const int c = PolygonConfig::offset(cfg.center());
  Eigen::VectorXd ex = Eigen::VectorXd::Zero(cfg.dimension());
  Eigen::VectorXd ey = ex;
  ex[c] = 1.0;
  ey[c + 1] = 1.0;

  const auto f0 = fourier_vectors(cfg, 0);
  add_group(0, 1, {Irrep::Kind::phi1, 0}, {{BasisKind::v, f0.v1.real()}});
  add_group(0, -1, {Irrep::Kind::phi2, 0}, {{BasisKind::w, f0.v2.real()}});

  for (int l = 1; l <= n / 2; ++l) {
    const auto f = fourier_vectors(cfg, l);
    Eigen::VectorXd v = f.v1.real();
    Eigen::VectorXd vp = f.v2.imag();
    Eigen::VectorXd w = f.v2.real();
    Eigen::VectorXd wp = -f.v1.imag();
    if (2 * l == n) {
      // v' and w' vanish: two one-dimensional sectors.
      add_group(l, 1, {Irrep::Kind::phi3, 0}, {{BasisKind::v, v}});
      add_group(l, -1, {Irrep::Kind::phi4, 0}, {{BasisKind::w, w}});
    } else if (l == 1) {
      add_group(1, 1, {Irrep::Kind::rho, 1},
                {{BasisKind::v, v}, {BasisKind::v_prime, vp},
                 {BasisKind::center_x, ex}});
      add_group(1, -1, {Irrep::Kind::rho, 1},
                {{BasisKind::w_prime, wp}, {BasisKind::w, w},
                 {BasisKind::center_y, ey}});
    } else {
      add_group(l, 1, {Irrep::Kind::rho, l},
                {{BasisKind::v, v}, {BasisKind::v_prime, vp}});
      add_group(l, -1, {Irrep::Kind::rho, l},
                {{BasisKind::w_prime, wp}, {BasisKind::w, w}});
    }
  }

  // Modified Gram-Schmidt inside each group; groups are mutually orthogonal.
  basis.B.resize(cfg.dimension(), static_cast<Eigen::Index>(basis.vectors.size()));
  for (const auto& g : basis.groups) {
    for (int i = 0; i < g.size; ++i) {
      Eigen::VectorXd u = basis.vectors[g.first + i].raw;
      for (int j = 0; j < i; ++j) {
        const auto q = basis.B.col(g.first + j);
        u -= q.dot(u) * q;
      }
      const double norm = u.norm();
      if (norm < 1e-12) throw ConsistencyError("degenerate basis vector");
      basis.B.col(g.first + i) = u / norm;
    }
  }
  return basis;
}

}  // namespace ngon
