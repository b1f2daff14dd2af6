#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ngon/hessian.hpp"
#include "ngon/spectral.hpp"
#include "support/frozen.hpp"
#include "support/oracles.hpp"

using namespace ngon;
using Catch::Approx;

TEST_CASE("mode coefficients, n = 3 by hand", "[spectral]") {
  const auto geo = geometry_cache(build_config(3, 1.0));
  const auto c = mode_coefficients(geo, 1);
  const double q = 1.0 / (4.0 * std::sqrt(3.0));
  CHECK(c.u_l1 == Approx(q).epsilon(1e-14));
  CHECK(c.up_l2 == Approx(q).epsilon(1e-14));
  CHECK(c.u_l2_im == Approx(q).epsilon(1e-14));
  CHECK(c.up_l1_im == Approx(-q).epsilon(1e-14));
  CHECK_THROWS_AS(mode_coefficients(geo, 2), std::invalid_argument);
  CHECK_THROWS_AS(mode_coefficients(geo, 0), std::invalid_argument);
}

TEST_CASE("mode coefficients match product-to-sum oracle", "[spectral]") {
  const int n = GENERATE(range(3, 31));
  const auto geo = geometry_cache(build_config(n, 0.0));
  for (int l = 1; l <= n / 2; ++l) {
    const auto c = mode_coefficients(geo, l);
    const auto o = oracle::mode_sums(n, l);
    const double scale = 1.0 + std::abs(o.u_l1) + std::abs(o.up_l2);
    CHECK(std::abs(c.u_l1 - o.u_l1) < 1e-13 * scale);
    CHECK(std::abs(c.up_l2 - o.up_l2) < 1e-13 * scale);
    CHECK(std::abs(c.u_l2_im - o.u_l2_im) < 1e-13 * scale);
    CHECK(std::abs(c.up_l1_im - o.up_l1_im) < 1e-13 * scale);
  }
  if (n % 2 == 0) CHECK(std::abs(mode_coefficients(geo, n / 2).u_l2_im) < 1e-12);
}

TEST_CASE("mode-1 block, n = 3, m = 1", "[spectral]") {
  const auto geo = geometry_cache(build_config(3, 1.0));
  const auto A = block_3x3(geo, mode_coefficients(geo, 1), 1.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(A(i, j) == Approx(frozen::A1_n3_m1[i][j]).margin(1e-12));
}

TEST_CASE("blocks reproduce the frozen spectra", "[spectral]") {
  struct Case {
    int n;
    double m;
    const std::vector<double>* expected;
  };
  const auto c = GENERATE(Case{3, 1.0, &frozen::spectrum_n3_m1},
                          Case{4, 1.0, &frozen::spectrum_n4_m1},
                          Case{6, 0.5, &frozen::spectrum_n6_m05});
  const auto geo = geometry_cache(build_config(c.n, c.m));
  const auto spectrum = block_spectrum(assemble_blocks(geo, c.m), c.n);
  CHECK(oracle::max_abs_diff(spectrum, *c.expected) < 1e-11);
}

TEST_CASE("A_l is symmetric with a real spectrum", "[spectral]") {
  const int n = GENERATE(range(4, 21));
  const double m = GENERATE(0.0, 0.3, 4.0);
  const auto geo = geometry_cache(build_config(n, m));
  for (int l = 2; l <= n / 2; ++l) {
    const auto A = block_2x2(geo, mode_coefficients(geo, l), m);
    CHECK(std::abs(A(0, 1) - A(1, 0)) < 1e-12 * A.norm());
    const auto e = eigenvalues_2x2(A);
    const auto o = oracle::eigenvalues(A);
    CHECK(e[0] == Approx(o[0]).margin(1e-12 * A.norm()));
    CHECK(e[1] == Approx(o[1]).margin(1e-12 * A.norm()));
  }
}

TEST_CASE("cubic eigenvalues of A_1 agree with a general eigensolver", "[spectral]") {
  const int n = GENERATE(range(3, 21));
  const double m = GENERATE(0.05, 1.0, 10.0);
  const auto geo = geometry_cache(build_config(n, m));
  const Eigen::Matrix3d A = block_3x3(geo, mode_coefficients(geo, 1), m);
  const auto e = eigenvalues_3x3(A);
  Eigen::EigenSolver<Eigen::Matrix3d> solver(A);
  std::vector<double> o;
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(solver.eigenvalues()[i].imag()) < 1e-9 * A.norm());
    o.push_back(solver.eigenvalues()[i].real());
  }
  std::sort(o.begin(), o.end());
  for (int i = 0; i < 3; ++i) CHECK(e[i] == Approx(o[i]).margin(1e-10 * A.norm()));
}

TEST_CASE("eigenvalues_2x2 rejects complex spectra", "[spectral]") {
  Eigen::Matrix2d R;
  R << 0.0, -1.0, 1.0, 0.0;
  CHECK_THROWS_AS(eigenvalues_2x2(R), ConsistencyError);
}

TEST_CASE("det A_1 = -I0 m p(m)", "[spectral]") {
  const int n = GENERATE(range(3, 31));
  const auto geo = geometry_cache(build_config(n, 0.0));
  const auto c = mode_coefficients(geo, 1);
  for (double m : {0.0, 0.2, 1.0, 3.5, 25.0}) {
    const double det = block_3x3(geo, c, m).determinant();
    const double expected = -geo.I0 * m * mode1_reduced_determinant(geo, c, m);
    CHECK(std::abs(det - expected) <= 1e-11 * std::max(1.0, std::abs(det)));
  }
  CHECK_THROWS_AS(block_3x3(geo, c, -1.0), std::invalid_argument);
}

TEST_CASE("blocks agree with h-coefficients of the full Hessian", "[spectral]") {
  const int n = GENERATE(range(4, 17));
  const double m = GENERATE(0.1, 1.0, 10.0);
  const auto cfg = build_config(n, m);
  const auto geo = geometry_cache(cfg);
  const auto H = assemble_terms(cfg, geo).H;
  for (int l = 2; l <= n / 2; ++l) {
    const auto hc = h_coefficients(H, cfg, l);
    const Eigen::Matrix2d fromH = block_from_h(hc);
    const Eigen::Matrix2d closed = block_2x2(geo, mode_coefficients(geo, l), m);
    CHECK((fromH - closed).norm() < 1e-10 * closed.norm());
  }
}

TEST_CASE("scalar blocks equal Rayleigh quotients of the full Hessian", "[spectral]") {
  const int n = GENERATE(4, 6, 8, 10, 12, 14, 16);
  const double m = GENERATE(0.1, 2.0);
  const auto cfg = build_config(n, m);
  const auto geo = geometry_cache(cfg);
  const auto H = assemble_terms(cfg, geo).H;
  const auto f = fourier_vectors(cfg, n / 2);
  const Eigen::VectorXd v = f.v1.real();
  const Eigen::VectorXd w = f.v2.real();
  const auto scalars = scalar_blocks(geo, m);
  REQUIRE(scalars.size() == 4);
  CHECK(scalars[0].value == 0.0);
  CHECK(scalars[1].value == 0.0);
  CHECK(scalars[2].value == Approx(v.dot(H * v) / v.squaredNorm()).epsilon(1e-11));
  CHECK(scalars[3].value == Approx(w.dot(H * w) / w.squaredNorm()).epsilon(1e-11));
  CHECK(scalar_blocks(geometry_cache(build_config(n + 1, m)), m).size() == 2);
}

TEST_CASE("block spectrum size matches the phase-space dimension", "[spectral]") {
  const int n = GENERATE(range(3, 20));
  const auto geo = geometry_cache(build_config(n, 1.0));
  CHECK(block_spectrum(assemble_blocks(geo, 1.0), n).size() ==
        static_cast<std::size_t>(2 * n + 2));
}
