#pragma once

// Brute-force ground truth for the block formulas: the full (2n+2)^2 Hessian
// of f(z) = sqrt(2 I(z)) U(z) at z0, assembled from its four terms
//     H = C + C^T + U0 D + I0 V,
// C = grad(sqrt 2I) grad(U)^T, D = Hess(sqrt 2I), V = Hess(U),
// checked against finite differences of f itself.
//
// f is invariant under scaling and rotation but not translation (I is taken
// about the origin), so the trivial kernel at z0 is two-dimensional.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ngon/geometry.hpp"
#include "ngon/representation.hpp"

namespace ngon {

/// Sign of the unit separation vector u_kj entering the C term.
enum class SeparationConvention {
  forward,   // u_kj = (q_j - q_k) / d_kj
  backward,  // u_kj = (q_k - q_j) / d_kj
};

inline std::string to_string(SeparationConvention c) {
  return c == SeparationConvention::forward ? "forward" : "backward";
}

struct HessianTerms {
  Eigen::MatrixXd C;
  Eigen::MatrixXd D;
  Eigen::MatrixXd V;
  Eigen::MatrixXd H;
  SeparationConvention convention = SeparationConvention::forward;
};

namespace detail {

inline Eigen::Matrix2d cell(const Eigen::MatrixXd& M, int k, int j) {
  return M.block<2, 2>(PolygonConfig::offset(k), PolygonConfig::offset(j));
}

inline void set_cell(Eigen::MatrixXd& M, int k, int j,
                     const Eigen::Matrix2d& value) {
  M.block<2, 2>(PolygonConfig::offset(k), PolygonConfig::offset(j)) = value;
}

// Vertex index in 1..n after cyclic shift.
inline int vertex(int k, int n) { return wrap_index(k - 1, n) + 1; }

// Fill vertex rows 1..n-1 from row n with H'_{j,j+k} = R(j theta) H'_{nk} R^T,
// including the vertex-centre column.
inline void propagate_rows(Eigen::MatrixXd& M, const PolygonConfig& cfg) {
  const int n = cfg.n;
  for (int j = 1; j < n; ++j) {
    const Eigen::Matrix2d R = rotation2(j * cfg.theta);
    for (int k = 1; k <= n; ++k) {
      set_cell(M, j, vertex(j + k, n), R * cell(M, n, k) * R.transpose());
    }
    set_cell(M, j, n + 1, R * cell(M, n, n + 1) * R.transpose());
  }
}

}  // namespace detail

/// Term matrices from their row-n cells, extended to every vertex row by
/// rotation equivariance; centre cells filled directly.
inline HessianTerms assemble_terms(
    const PolygonConfig& cfg, const GeometryCache& geo,
    SeparationConvention convention = SeparationConvention::forward) {
  using detail::cell;
  using detail::set_cell;
  const int n = cfg.n;
  const int N = cfg.dimension();
  const int c = n + 1;
  const double m = cfg.m;
  const double I0 = geo.I0;
  const Eigen::Matrix2d E = Eigen::Matrix2d::Identity();
  const double sign = convention == SeparationConvention::forward ? 1.0 : -1.0;
  auto u = [&](int k, int j) -> Eigen::Vector2d {
    return sign * (cfg.body(j) - cfg.body(k)) / geo.distance(k, j);
  };

  HessianTerms t;
  t.convention = convention;
  t.C = Eigen::MatrixXd::Zero(N, N);
  t.D = Eigen::MatrixXd::Zero(N, N);
  t.V = Eigen::MatrixXd::Zero(N, N);

  const Eigen::Vector2d qn = cfg.body(n);
  Eigen::Matrix2d Vnn = Eigen::Matrix2d::Zero();
  for (int k = 1; k <= n; ++k) {
    const Eigen::Vector2d qk = cfg.body(k);
    Eigen::Vector2d pull = Eigen::Vector2d::Zero();
    for (int j = 1; j <= n; ++j) {
      if (j == k) continue;
      const double d = geo.distance(j, k);
      pull += u(k, j) / (d * d);
    }
    set_cell(t.C, n, k, qn * pull.transpose() / I0 - (m / I0) * qn * qk.transpose());

    Eigen::Matrix2d Dnk = -qn * qk.transpose() / (I0 * I0 * I0);
    if (k == n) Dnk += E / I0;
    set_cell(t.D, n, k, Dnk);

    if (k != n) {
      const Eigen::Vector2d unk = u(n, k);
      const double d = geo.distance(n, k);
      const Eigen::Matrix2d Vnk = (E - 3.0 * unk * unk.transpose()) / (d * d * d);
      set_cell(t.V, n, k, Vnk);
      Vnn -= Vnk;
    }
  }
  const Eigen::Matrix2d Vcn = m * (E - 3.0 * qn * qn.transpose());
  set_cell(t.V, n, n, Vnn - Vcn);
  set_cell(t.V, n, c, Vcn);

  detail::propagate_rows(t.C, cfg);
  detail::propagate_rows(t.D, cfg);
  detail::propagate_rows(t.V, cfg);

  // Centre row: C and D vanish there apart from D_cc.
  Eigen::Matrix2d Vcc = Eigen::Matrix2d::Zero();
  for (int k = 1; k <= n; ++k) {
    const Eigen::Vector2d qk = cfg.body(k);
    const Eigen::Matrix2d Vck = m * (E - 3.0 * qk * qk.transpose());
    set_cell(t.V, c, k, Vck);
    Vcc -= Vck;
  }
  set_cell(t.V, c, c, Vcc);
  set_cell(t.D, c, c, (m / I0) * E);

  t.H = t.C + t.C.transpose() + geo.U0 * t.D + I0 * t.V;
  return t;
}

// ---------------------------------------------------------------------------
// Direct evaluation of f and its first derivatives

inline double inertia(const PolygonConfig& cfg, const Eigen::VectorXd& z) {
  double I = 0.0;
  for (int k = 1; k <= cfg.n + 1; ++k) {
    I += 0.5 * cfg.mass(k) * z.segment<2>(PolygonConfig::offset(k)).squaredNorm();
  }
  return I;
}

inline double potential(const PolygonConfig& cfg, const Eigen::VectorXd& z) {
  double U = 0.0;
  for (int i = 1; i <= cfg.n + 1; ++i) {
    for (int j = i + 1; j <= cfg.n + 1; ++j) {
      const double r = (z.segment<2>(PolygonConfig::offset(i)) -
                        z.segment<2>(PolygonConfig::offset(j)))
                           .norm();
      if (r < 1e-12) throw std::domain_error("coincident bodies");
      U += cfg.mass(i) * cfg.mass(j) / r;
    }
  }
  return U;
}

/// f(z) = sqrt(2 I(z)) U(z).
inline double objective(const PolygonConfig& cfg, const Eigen::VectorXd& z) {
  return std::sqrt(2.0 * inertia(cfg, z)) * potential(cfg, z);
}

inline Eigen::VectorXd inertia_root_gradient(const PolygonConfig& cfg,
                                             const Eigen::VectorXd& z) {
  const double root = std::sqrt(2.0 * inertia(cfg, z));
  Eigen::VectorXd g(z.size());
  for (int k = 1; k <= cfg.n + 1; ++k) {
    const int o = PolygonConfig::offset(k);
    g.segment<2>(o) = cfg.mass(k) * z.segment<2>(o) / root;
  }
  return g;
}

inline Eigen::VectorXd potential_gradient(const PolygonConfig& cfg,
                                          const Eigen::VectorXd& z) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(z.size());
  for (int i = 1; i <= cfg.n + 1; ++i) {
    for (int j = i + 1; j <= cfg.n + 1; ++j) {
      const int oi = PolygonConfig::offset(i);
      const int oj = PolygonConfig::offset(j);
      const Eigen::Vector2d diff = z.segment<2>(oj) - z.segment<2>(oi);
      const double r = diff.norm();
      const Eigen::Vector2d pull = cfg.mass(i) * cfg.mass(j) * diff / (r * r * r);
      g.segment<2>(oi) += pull;
      g.segment<2>(oj) -= pull;
    }
  }
  return g;
}

inline Eigen::VectorXd objective_gradient(const PolygonConfig& cfg,
                                          const Eigen::VectorXd& z) {
  return potential(cfg, z) * inertia_root_gradient(cfg, z) +
         std::sqrt(2.0 * inertia(cfg, z)) * potential_gradient(cfg, z);
}

/// grad(sqrt 2I) grad(U)^T at z0 from the two gradients, independent of the
/// cell formulas used by assemble_terms.
inline Eigen::MatrixXd coupling_direct(const PolygonConfig& cfg) {
  return inertia_root_gradient(cfg, cfg.positions) *
         potential_gradient(cfg, cfg.positions).transpose();
}

// ---------------------------------------------------------------------------
// Finite differences

namespace detail {

inline Eigen::MatrixXd central_differences(const PolygonConfig& cfg,
                                           double h) {
  const int N = cfg.dimension();
  Eigen::VectorXd z = cfg.positions;
  const double f0 = objective(cfg, z);
  Eigen::MatrixXd out(N, N);
  auto eval = [&](int i, double di, int j, double dj) {
    z[i] += di;
    z[j] += dj;
    const double value = objective(cfg, z);
    z[i] -= di;
    z[j] -= dj;
    return value;
  };
  for (int i = 0; i < N; ++i) {
    out(i, i) = (eval(i, h, i, 0.0) - 2.0 * f0 + eval(i, -h, i, 0.0)) / (h * h);
    for (int j = i + 1; j < N; ++j) {
      const double value = (eval(i, h, j, h) - eval(i, h, j, -h) -
                            eval(i, -h, j, h) + eval(i, -h, j, -h)) /
                           (4.0 * h * h);
      out(i, j) = value;
      out(j, i) = value;
    }
  }
  return out;
}

}  // namespace detail

constexpr double kDefaultFdStep = 1e-3;

/// Central second differences of f at z0 with one Richardson step over
/// (h, h/2).
inline Eigen::MatrixXd fd_hessian(const PolygonConfig& cfg,
                                  double step = kDefaultFdStep) {
  if (!(step >= 1e-7 && step <= 1e-3)) {
    throw std::invalid_argument("finite-difference step must lie in [1e-7, 1e-3]");
  }
  const Eigen::MatrixXd coarse = detail::central_differences(cfg, step);
  const Eigen::MatrixXd fine = detail::central_differences(cfg, 0.5 * step);
  return (4.0 * fine - coarse) / 3.0;
}

inline double relative_error(const Eigen::MatrixXd& reference,
                             const Eigen::MatrixXd& candidate) {
  return (candidate - reference).norm() / reference.norm();
}

struct ValidatedHessian {
  HessianTerms terms;
  double fd_error = 0.0;
  bool flipped = false;  // backward convention was needed
};

/// Assembles H, checks it against finite differences and, if the check
/// fails, retries once with the opposite separation sign.
inline ValidatedHessian assemble_validated(const PolygonConfig& cfg,
                                           const GeometryCache& geo,
                                           double tol = 1e-5,
                                           double step = kDefaultFdStep) {
  const Eigen::MatrixXd fd = fd_hessian(cfg, step);
  ValidatedHessian out;
  out.terms = assemble_terms(cfg, geo, SeparationConvention::forward);
  out.fd_error = relative_error(out.terms.H, fd);
  if (out.fd_error <= tol) return out;
  out.terms = assemble_terms(cfg, geo, SeparationConvention::backward);
  out.fd_error = relative_error(out.terms.H, fd);
  out.flipped = true;
  if (out.fd_error <= tol) return out;
  throw ConsistencyError("analytic Hessian disagrees with finite differences "
                         "under both separation conventions");
}

// ---------------------------------------------------------------------------
// Symmetry checks

inline double equivariance_residual(const Eigen::MatrixXd& H,
                                    const PolygonConfig& cfg,
                                    const GroupElement& a) {
  const Eigen::MatrixXd D = rep_matrix(cfg, a).entries;
  return (D * H - H * D).norm() / H.norm();
}

/// max over the generators r, s of ||D(a) H - H D(a)|| / ||H||.
inline double equivariance_check(const Eigen::MatrixXd& H,
                                 const PolygonConfig& cfg) {
  return std::max(equivariance_residual(H, cfg, GroupElement::r()),
                  equivariance_residual(H, cfg, GroupElement::s()));
}

/// Matrix of H restricted to span(G) in the (possibly non-orthonormal)
/// columns of G: (G^T G)^{-1} G^T H G.
inline Eigen::MatrixXd compress(const Eigen::MatrixXd& H,
                                const Eigen::MatrixXd& G) {
  return (G.transpose() * G).ldlt().solve(G.transpose() * H * G);
}

struct DiagonalBlock {
  ModeGroup group;
  Eigen::MatrixXd block;
};

struct BlockDiagonalReport {
  std::vector<DiagonalBlock> blocks;
  double max_off_block = 0.0;
  double h_norm = 0.0;

  std::vector<int> sizes() const {
    std::vector<int> out;
    for (const auto& b : blocks) out.push_back(b.group.size);
    return out;
  }
};

/// B^T H B split along the basis groups. Throws if any entry outside the
/// diagonal blocks exceeds tol * ||H||.
inline BlockDiagonalReport conjugate_blocks(const Eigen::MatrixXd& H,
                                            const SymmetryBasis& basis,
                                            double tol = 1e-9) {
  const Eigen::MatrixXd M = basis.B.transpose() * H * basis.B;
  Eigen::MatrixXd off = M;
  BlockDiagonalReport report;
  report.h_norm = H.norm();
  for (const auto& g : basis.groups) {
    report.blocks.push_back({g, M.block(g.first, g.first, g.size, g.size)});
    off.block(g.first, g.first, g.size, g.size).setZero();
  }
  report.max_off_block = off.cwiseAbs().maxCoeff();
  if (report.max_off_block > tol * report.h_norm) {
    throw ConsistencyError("Hessian is not block-diagonal in the symmetry basis");
  }
  return report;
}

// ---------------------------------------------------------------------------
// Dense symmetric eigensolver

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Cyclic Jacobi. Sorted ascending.
inline std::vector<double> symmetric_eigenvalues(const Eigen::MatrixXd& M,
                                                 int max_sweeps = 50) {
  const Eigen::Index N = M.rows();
  if (M.cols() != N) throw std::invalid_argument("matrix is not square");
  if (N == 0) return {};
  const double scale = M.norm();
  if ((M - M.transpose()).norm() > 1e-8 * std::max(1.0, scale)) {
    throw std::invalid_argument("matrix is not symmetric");
  }
  Eigen::MatrixXd A = 0.5 * (M + M.transpose());
  const double target = 1e-12 * scale;
  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index p = 0; p < N; ++p)
      for (Eigen::Index q = p + 1; q < N; ++q) s += 2.0 * A(p, q) * A(p, q);
    return std::sqrt(s);
  };
  int sweep = 0;
  while (off_norm() > target) {
    if (sweep++ >= max_sweeps) {
      throw ConvergenceError("Jacobi eigensolver did not converge in " +
                             std::to_string(max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < N - 1; ++p) {
      for (Eigen::Index q = p + 1; q < N; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double tau = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < N; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < N; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> eig(static_cast<std::size_t>(N));
  for (Eigen::Index i = 0; i < N; ++i) eig[static_cast<std::size_t>(i)] = A(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

struct SpectrumReport {
  std::vector<double> eigenvalues;
  int kernel_dim = 0;
  int trivial_dim = 2;  // dilation + rotation
};

constexpr double kDefaultKernelTol = 1e-7;

inline SpectrumReport spectrum_report(const Eigen::MatrixXd& H,
                                      double kernel_tol = kDefaultKernelTol) {
  SpectrumReport report;
  report.eigenvalues = symmetric_eigenvalues(H);
  report.kernel_dim = static_cast<int>(
      std::count_if(report.eigenvalues.begin(), report.eigenvalues.end(),
                    [&](double x) { return std::abs(x) < kernel_tol; }));
  return report;
}

// ---------------------------------------------------------------------------
// Per-term Fourier sums over block row n and the centre coupling

struct ModeSums {
  Eigen::Vector2cd C, Cp;  // coupling term
  Eigen::Vector2cd I, Ip;  // Hess(sqrt 2I)
  Eigen::Vector2cd U, Up;  // Hess(U)
};

inline ModeSums term_mode_sums(const HessianTerms& t,
                                   const PolygonConfig& cfg, int l) {
  using cd = std::complex<double>;
  auto sum = [&](const Eigen::MatrixXd& M, bool primed) {
    Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
    for (int k = 1; k <= cfg.n; ++k) {
      const double phase = -l * k * cfg.theta;
      const cd e(std::cos(phase), std::sin(phase));
      const double c = std::cos(k * cfg.theta);
      const double s = std::sin(k * cfg.theta);
      const Eigen::Vector2d dir = primed ? Eigen::Vector2d(-s, c) : Eigen::Vector2d(c, s);
      acc += e * (detail::cell(M, cfg.n, k) * dir).cast<cd>();
    }
    return acc;
  };
  return {sum(t.C, false), sum(t.C, true), sum(t.D, false),
          sum(t.D, true),  sum(t.V, false), sum(t.V, true)};
}

struct CouplingResiduals {
  double potential_x = 0.0;  // V e_{2n+1} vs m(-2 v1 + v1' + n/2 e_{2n+1})
  double potential_y = 0.0;  // V e_{2n+2} vs m(-2 w1' + w1 + n/2 e_{2n+2})
  double inertia = 0.0;      // D e_c vs (m/I0) e_c
  double coupling = 0.0;     // C e_c and C^T e_c vs 0

  double max() const {
    return std::max({potential_x, potential_y, inertia, coupling});
  }
};

inline CouplingResiduals center_coupling_residuals(const HessianTerms& t,
                                                   const PolygonConfig& cfg) {
  const int N = cfg.dimension();
  const int c = PolygonConfig::offset(cfg.center());
  const double m = cfg.m;
  const double I0 = std::sqrt(static_cast<double>(cfg.n));
  Eigen::VectorXd ex = Eigen::VectorXd::Zero(N);
  Eigen::VectorXd ey = Eigen::VectorXd::Zero(N);
  ex[c] = 1.0;
  ey[c + 1] = 1.0;
  const auto f = fourier_vectors(cfg, 1);
  const Eigen::VectorXd v1 = f.v1.real();
  const Eigen::VectorXd v1p = f.v2.imag();
  const Eigen::VectorXd w1 = f.v2.real();
  const Eigen::VectorXd w1p = -f.v1.imag();
  const double half_n = 0.5 * cfg.n;

  CouplingResiduals r;
  r.potential_x = (t.V * ex - m * (-2.0 * v1 + v1p + half_n * ex)).norm();
  r.potential_y = (t.V * ey - m * (-2.0 * w1p + w1 + half_n * ey)).norm();
  r.inertia = std::max((t.D * ex - (m / I0) * ex).norm(),
                       (t.D * ey - (m / I0) * ey).norm());
  r.coupling = std::max({(t.C * ex).norm(), (t.C * ey).norm(),
                         (t.C.transpose() * ex).norm(),
                         (t.C.transpose() * ey).norm()});
  return r;
}

}  // namespace ngon
