#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "common.hpp"
#include "ness/error.hpp"
#include "ness/oracles.hpp"

using namespace ness;
using testing_util::geometry;
using testing_util::rlm;

TEST_CASE("moment traces") {
  CHECK(moment_trace(0.5 * Eigen::MatrixXcd::Identity(7, 7), 1) == doctest::Approx(3.5));
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(4, 4);
  P(1, 1) = P(3, 3) = 1.0;
  for (int p : {1, 2, 5}) CHECK(moment_trace(P, p) == doctest::Approx(2.0));
  const auto C = testing_util::random_correlation(20, 8);
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(20, 20);
  for (int p = 1; p <= 4; ++p) {
    M = M * C;
    CHECK(std::abs(moment_trace(C, p) - M.trace().real()) < 1e-9);
  }
  CHECK_THROWS_AS(moment_trace(C, 0), InvalidArgument);
}

TEST_CASE("single-interval moment densities") {
  QuadratureSpec q;
  q.abs_tol = 1e-12;
  const auto eq = SteadyState{resonant_level(0.7), ReservoirPair{0.1, 0.5, 0.1, 0.5}, {}};
  const BiasContext c{eq, q};
  auto twice = [&](double k) { return 2 * std::pow(eq.f_L(k), 3) / (2 * kPi); };
  CHECK(single_interval_moment_asymptotic(c, Side::Left, 3, 1) ==
        doctest::Approx(integrate<double>(twice, 0, kPi, q).value).epsilon(1e-11));
  // p = 1 on the right side is the particle density
  const auto s = rlm(1.0, 0.5, 1.0, -0.3, 0.4);
  const BiasContext cs{s, q};
  auto dens = [&](double k) {
    const double T = s.model.transmission(k);
    return (s.f_R(k) + T * s.f_L(k) + (1 - T) * s.f_R(k)) / (2 * kPi);
  };
  CHECK(single_interval_moment_asymptotic(cs, Side::Right, 1, 10) ==
        doctest::Approx(10 * integrate<double>(dens, 0, kPi, q).value).epsilon(1e-11));
}

TEST_CASE("moment slope of a single interval") {
  const auto s = rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  const BiasContext c{s, QuadratureSpec{}};
  const auto small = geometry(0, 100, 0, 100), large = geometry(0, 200, 0, 200);
  const auto C1 = build_restricted_matrix(small.right_sites(), CorrelationMode::LongRange, s, c.quad).matrix;
  const auto C2 = build_restricted_matrix(large.right_sites(), CorrelationMode::LongRange, s, c.quad).matrix;
  for (int p = 1; p <= 4; ++p) {
    const double slope = (moment_trace(C2, p) - moment_trace(C1, p)) / 100.0;
    CHECK(slope == doctest::Approx(single_interval_moment_asymptotic(c, Side::Right, p, 1)).epsilon(0.02));
  }
}

TEST_CASE("moment decomposition") {
  const auto s = rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  const BiasContext c{s, QuadratureSpec{}};
  const auto g = geometry(25, 50, 0, 100);
  const auto r1 = moment_decomposition_check(c, g, 1);
  CHECK(r1.relative_error < 1e-12);
  const auto a = moment_decomposition_check(c, g, 3);
  SubsystemPair g2 = geometry(50, 100, 0, 200);
  const auto b = moment_decomposition_check(c, g2, 3);
  CHECK(b.relative_error < a.relative_error);
  CHECK(b.relative_error < 1e-2);
  // disjoint mirror images: additivity up to boundary terms
  const auto far = moment_decomposition_check(c, geometry(0, 50, 80, 50), 2);
  CHECK(far.relative_error < 1e-2);
  SubsystemPair wrong = g;
  wrong.m0 = 1;
  CHECK_THROWS_AS(moment_decomposition_check(c, wrong, 2), InvalidArgument);
}

TEST_CASE("mirror moments do not depend on the absolute distance") {
  const auto s = rlm(1.0, 0.4, 0.8, -0.4, 0.5);
  QuadratureSpec q;
  const auto g1 = geometry(20, 30, 10, 30), g2 = geometry(50, 30, 40, 30);
  const auto M1 = build_restricted_matrix(g1.mirror_sites(), CorrelationMode::Exact, s, q).matrix;
  const auto M2 = build_restricted_matrix(g2.mirror_sites(), CorrelationMode::Exact, s, q).matrix;
  for (int p = 2; p <= 4; ++p)
    CHECK(moment_trace(M2, p) == doctest::Approx(moment_trace(M1, p)).epsilon(0.01));
}

TEST_CASE("Szego-Widom density basics") {
  QuadratureSpec q;
  const auto s = rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  const auto phi = phi_symbol(s);
  const SymbolTransform zero = [](const Eigen::Matrix2cd&) { return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity()); };
  CHECK(std::abs(szego_widom_density(phi, zero, q)) < 1e-14);
  const BlockSymbol c3{[](double) { return Eigen::Matrix2cd(3.0 * Eigen::Matrix2cd::Identity()); }, {}, "3"};
  const SymbolTransform id = [](const Eigen::Matrix2cd& m) { return m; };
  CHECK(std::abs(szego_widom_density(c3, id, q) - 2 * std::log(3.0)) < 1e-12);
  const BlockSymbol singular{[](double) { return Eigen::Matrix2cd(Eigen::Matrix2cd::Zero()); }, {}, "0"};
  CHECK_THROWS_AS(szego_widom_density(singular, id, q), NumericalError);
}

TEST_CASE("Szego-Widom density agrees with the mirror entropy") {
  QuadratureSpec q;
  q.abs_tol = 1e-12;
  const auto s = rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  const cdouble z(-1.0, 1.0);
  const SymbolTransform t = [z](const Eigen::Matrix2cd& m) {
    return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() + z * m);
  };
  const double sw = -2.0 * szego_widom_density(phi_symbol(s), t, q).real();
  const double direct = mirror_entropy_asymptotic({s, q}, 2.0, 1).density;
  CHECK(sw == doctest::Approx(direct).epsilon(1e-10));
  // also matches the frozen independent value
  CHECK(direct == doctest::Approx(1.00979303059842).epsilon(1e-10));
}

TEST_CASE("determinant sequence converges to the density") {
  const auto s = rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  QuadratureSpec q;
  q.abs_tol = 1e-11;
  const auto phi = phi_symbol(s);
  const cdouble z = std::polar(1.0, 2 * kPi * 0.5 / 2.0) - 1.0;
  const SymbolTransform t = [z](const Eigen::Matrix2cd& m) {
    return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() + z * m);
  };
  const cdouble density = szego_widom_density(phi, t, q);
  double prev = 1e300;
  for (long l : {25L, 50L, 100L}) {
    const Eigen::MatrixXcd C = block_toeplitz(phi, l, q);
    const cdouble ld = log_det_eigen(Eigen::MatrixXcd::Identity(2 * l, 2 * l) + z * C);
    const double err = std::abs(ld / double(l) - density);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("generalized determinant check") {
  const auto s = rlm(1.0, 0.0, 0.5 + 1.0, 0.0, 0.5);
  QuadratureSpec q;
  q.abs_tol = 1e-11;
  const auto phi = phi_symbol(s), cross = phi_cross_symbol(s);
  const BlockSymbol id{[](double) { return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity()); }, {}, "I"};
  SUBCASE("identity denominator reduces to Szego-Widom") {
    const auto r = generalized_sw_check({{phi, id}}, {20}, q);
    const SymbolTransform t = [](const Eigen::Matrix2cd& m) { return Eigen::Matrix2cd(Eigen::Matrix2cd::Identity() + m); };
    CHECK(std::abs(r.points[0].prediction - 20.0 * szego_widom_density(phi, t, q)) < 1e-9);
  }
  SUBCASE("equal pairs are exact") {
    const auto r = generalized_sw_check({{phi, phi}}, {10, 20}, q);
    for (const auto& p : r.points) {
      CHECK(std::abs(p.exact - 2.0 * p.ell * std::log(2.0)) < 1e-9);
      CHECK(p.relative_error < 1e-10);
    }
  }
  SUBCASE("PRMI pair error decreases") {
    const auto r = generalized_sw_check({{phi, cross}}, {25, 50, 100}, q);
    CHECK(r.decreasing());
    CHECK(r.points.back().min_rcond > 1e-12);
  }
  SUBCASE("singular denominator is rejected") {
    const BlockSymbol zero{[](double) { return Eigen::Matrix2cd(Eigen::Matrix2cd::Zero()); }, {}, "0"};
    CHECK_THROWS_AS(generalized_sw_check({{phi, zero}}, {5}, q), NumericalError);
  }
  CHECK_THROWS_AS(generalized_sw_check({}, {5}, q), InvalidArgument);
}

TEST_CASE("X_n = Y_n") {
  SUBCASE("T = 0 factorizes") {
    for (int n : {2, 4}) {
      const double fL = 0.3, fR = 0.8;
      const double expect = (std::pow(fL, n) + std::pow(1 - fL, n)) * (std::pow(fR, n) + std::pow(1 - fR, n));
      CHECK(std::abs(negativity_product_x(n, fL, fR, 0.0) - expect) < 1e-14);
      CHECK(negativity_polynomial(n, fL, fR, 0.0) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
  SUBCASE("n = 2 with pure reservoirs") {
    for (double T : {0.1, 0.5, 0.77}) {
      CHECK(negativity_polynomial(2, 1.0, 0.0, T) == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(negativity_product_x(2, 1.0, 0.0, T) - 1.0) < 1e-14);
    }
  }
  SUBCASE("fuzz") {
    for (int n : {2, 4, 6, 8}) {
      const auto r = xn_yn_fuzz(n, 1000, 7 + n);
      CHECK(r.samples == 1000);
      CHECK(r.max_difference < 1e-10);
      CHECK(r.max_root_residual < 1e-9);
      CHECK(r.max_imag_y < 1e-12);
    }
    // fixed seed, fixed statistic
    CHECK(xn_yn_fuzz(4, 50, 3).max_difference == xn_yn_fuzz(4, 50, 3).max_difference);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(negativity_product_x(3, 0.2, 0.3, 0.5), InvalidArgument);
    CHECK_THROWS_AS(negativity_roots(2, 0.4, 0.4), InvalidArgument);
    CHECK_THROWS_AS(xn_yn_fuzz(2, 0, 1), InvalidArgument);
  }
}
