#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

#include "common.hpp"
#include "ness/correlation.hpp"
#include "ness/error.hpp"
#include "ness/measures.hpp"

using namespace ness;
using testing_util::random_correlation;

namespace {

Eigen::MatrixXcd scalar(double a) { return Eigen::MatrixXcd::Constant(1, 1, a); }

Eigen::MatrixXcd diag(std::initializer_list<double> v) {
  Eigen::VectorXcd d(v.size());
  int i = 0;
  for (double x : v) d[i++] = x;
  return d.asDiagonal();
}

// A two-mode pure state: one particle in cos(a) c1 + sin(a) e^{i phi} c2.
Eigen::MatrixXcd bell(double a, double phi = 0.3) {
  Eigen::Vector2cd u(std::cos(a), std::polar(std::sin(a), phi));
  return u.conjugate() * u.transpose();
}

const double ln2 = std::log(2.0);

}  // namespace

TEST_CASE("Renyi and von Neumann entropies") {
  CHECK(renyi_entropy(scalar(0.5), 2.0).value == doctest::Approx(ln2));
  CHECK(renyi_entropy(scalar(0.25), 2.0).value == doctest::Approx(-std::log(0.625)));
  CHECK(std::abs(renyi_entropy(diag({0.0, 1.0, 1.0}), 3.0).value) < 1e-10);
  CHECK(von_neumann_entropy(scalar(0.5)).value == doctest::Approx(ln2));
  CHECK(std::abs(von_neumann_entropy(diag({0.0, 1.0})).value) < 1e-10);
  CHECK_THROWS_AS(renyi_entropy(scalar(0.5), 1.0), InvalidArgument);
  CHECK_THROWS_AS(renyi_entropy(scalar(0.5), -1.0), InvalidArgument);
}

TEST_CASE("Renyi entropy brackets the von Neumann limit") {
  const auto C = random_correlation(8, 11);
  const double s = von_neumann_entropy(C).value;
  const double lo = renyi_entropy(C, 1.0 + 1e-6).value, hi = renyi_entropy(C, 1.0 - 1e-6).value;
  CHECK(lo <= s);
  CHECK(s <= hi);
  CHECK(hi - lo < 1e-5);
}

TEST_CASE("spectrum excursion is reported") {
  Eigen::MatrixXcd C = diag({-1e-7, 0.5, 1.0 + 2e-7});
  const auto v = von_neumann_entropy(C);
  CHECK(v.diagnostics.spectrum_excursion == doctest::Approx(2e-7).epsilon(1e-3));
  CHECK(v.value == doctest::Approx(ln2).epsilon(1e-9));
}

TEST_CASE("mutual information") {
  const auto C1 = random_correlation(3, 1), C2 = random_correlation(2, 2);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(5, 5);
  C.topLeftCorner(3, 3) = C1;
  C.bottomRightCorner(2, 2) = C2;
  CHECK(std::abs(mutual_information(C1, C2, C).value) < 1e-12);
  CHECK(std::abs(renyi_mutual_information(C1, C2, C, 3.0).value) < 1e-12);
  const auto B = bell(kPi / 4);
  CHECK(mutual_information(B.topLeftCorner(1, 1), B.bottomRightCorner(1, 1), B).value ==
        doctest::Approx(2 * ln2));
  CHECK_THROWS_AS(mutual_information(C1, C2, C1), InvalidArgument);
}

TEST_CASE("negativity transform of a product state") {
  const double a = 0.3, b = 0.8;
  const auto X = negativity_transform(diag({a, b}), 1);
  const double ga = 2 * a - 1, gb = 1 - 2 * b;
  CHECK(std::abs(X(0, 0) - 0.5 * (1 - 2 * ga / (1 + ga * ga))) < 1e-14);
  CHECK(std::abs(X(1, 1) - 0.5 * (1 - 2 * gb / (1 + gb * gb))) < 1e-14);
  CHECK(std::abs(X(0, 1)) < 1e-15);
  const auto H = negativity_transform(diag({0.5, 0.5}), 1);
  CHECK((H - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("negativity transform has a real spectrum in [0, 1]") {
  for (int seed : {7, 8, 9})
    for (long n1 : {1L, 3L, 5L}) {
      const auto C = random_correlation(6, seed);
      MeasureDiagnostics d;
      const auto xi = negativity_spectrum(C, n1, SpectralOptions{}, &d);
      CHECK(d.spectrum_excursion < 1e-12);
      // the Hermitian route agrees with a general eigensolve of C_Xi itself
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(negativity_transform(C, n1), false);
      std::vector<double> re;
      for (const auto& l : es.eigenvalues()) {
        CHECK(std::abs(l.imag()) < 1e-10);
        re.push_back(l.real());
      }
      std::sort(re.begin(), re.end());
      for (long i = 0; i < xi.size(); ++i) CHECK(std::abs(re[i] - xi[i]) < 1e-12);
    }
}

TEST_CASE("fermionic negativity") {
  CHECK(std::abs(fermionic_negativity(diag({0.5, 0.5}), 1).value) < 1e-12);
  // pure modes: sqrt of eigensolver roundoff leaves ~1e-8
  CHECK(std::abs(fermionic_negativity(diag({0.0, 1.0, 1.0}), 2).value) < 1e-7);
  CHECK(fermionic_negativity(bell(kPi / 4), 1).value == doctest::Approx(ln2));
  CHECK(std::abs(renyi_negativity(diag({0.5, 0.5}), 1, 2).value + 2 * ln2) < 1e-12);
  CHECK_THROWS_AS(renyi_negativity(diag({0.5, 0.5}), 1, 3), InvalidArgument);
  CHECK_THROWS_AS(fermionic_negativity(diag({0.5, 0.5}), 3), InvalidArgument);
  CHECK(std::abs(fermionic_negativity(bell(0.4), 0).value) < 1e-7);
}

TEST_CASE("pure two-mode states satisfy E = I^(1/2) / 2") {
  for (double a : {0.2, 0.6, 1.1}) {
    const auto B = bell(a);
    const double E = fermionic_negativity(B, 1).value;
    const double I = renyi_mutual_information(B.topLeftCorner(1, 1), B.bottomRightCorner(1, 1), B, 0.5).value;
    // sqrt(nu) near pure eigenvalues turns roundoff 1e-16 into 1e-8
    CHECK(E == doctest::Approx(0.5 * I).epsilon(1e-7));
  }
}

TEST_CASE("Petz-Renyi mutual information") {
  const auto C1 = random_correlation(2, 3), C2 = random_correlation(3, 4);
  Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(5, 5);
  C.topLeftCorner(2, 2) = C1;
  C.bottomRightCorner(3, 3) = C2;
  CHECK(std::abs(petz_renyi_mi(C1, C2, C, 2.0).value) < 1e-12);
  const auto R = random_correlation(5, 9);
  const auto R1 = R.topLeftCorner(2, 2), R2 = R.bottomRightCorner(3, 3);
  const double mi = mutual_information(R1, R2, R).value;
  const double lo = petz_renyi_mi(R1, R2, R, 1.0 - 1e-5).value, hi = petz_renyi_mi(R1, R2, R, 1.0 + 1e-5).value;
  CHECK(0.5 * (lo + hi) == doctest::Approx(mi).epsilon(1e-8));
  CHECK_THROWS_AS(petz_renyi_mi(R1, R2, R, 1.0), InvalidArgument);
  CHECK_THROWS_AS(petz_renyi_mi(R1, R2, R, 0.0), InvalidArgument);
}

TEST_CASE("measures are nonnegative and bounded on random states") {
  for (std::uint64_t seed = 20; seed < 30; ++seed) {
    const auto C = random_correlation(6, seed);
    const auto C1 = C.topLeftCorner(2, 2), C2 = C.bottomRightCorner(4, 4);
    const double mi = mutual_information(C1, C2, C).value;
    const double E = fermionic_negativity(C, 2).value;
    CHECK(mi > -1e-9);
    CHECK(mi <= 4 * ln2 + 1e-9);
    CHECK(E > -1e-9);
    CHECK(E <= 2 * ln2 + 1e-9);
    for (double n : {0.5, 2.0, 3.0}) {
      const auto p = petz_renyi_mi(C1, C2, C, n);
      CHECK(p.value > -1e-9);
      CHECK(p.diagnostics.imag_residue < 1e-8);
    }
  }
}

TEST_CASE("invariance under local unitaries") {
  const auto C = random_correlation(5, 42);
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(5, 5);
  // block-diagonal unitary from the eigenvectors of random Hermitian blocks
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> e1(random_correlation(2, 5)), e2(random_correlation(3, 6));
  U.topLeftCorner(2, 2) = e1.eigenvectors();
  U.bottomRightCorner(3, 3) = e2.eigenvectors();
  const Eigen::MatrixXcd V = U.adjoint() * C * U;
  auto all = [](const Eigen::MatrixXcd& M) {
    const auto M1 = M.topLeftCorner(2, 2), M2 = M.bottomRightCorner(3, 3);
    return std::array<double, 4>{mutual_information(M1, M2, M).value,
                                 renyi_mutual_information(M1, M2, M, 2.0).value,
                                 petz_renyi_mi(M1, M2, M, 0.5).value, fermionic_negativity(M, 2).value};
  };
  const auto a = all(C), b = all(V);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
}

TEST_CASE("small long-range instance against an independent construction") {
  // frozen from a midpoint-sum matrix with numpy/scipy matrix functions
  const auto s = testing_util::rlm(1.0, 0.0, 2.0, 0.0, 1.0);
  QuadratureSpec q;
  q.abs_tol = 1e-12;
  const auto g = testing_util::geometry(1, 4, 0, 6);
  const auto C = build_restricted_matrix(g.union_sites(), CorrelationMode::LongRange, s, q).matrix;
  const auto C1 = C.topLeftCorner(4, 4), C2 = C.bottomRightCorner(6, 6);
  CHECK(mutual_information(C1, C2, C).value == doctest::Approx(0.0216228826564002).epsilon(1e-8));
  CHECK(fermionic_negativity(C, 4).value == doctest::Approx(0.0146967962967501).epsilon(1e-8));
  CHECK(petz_renyi_mi(C1, C2, C, 2.0).value == doctest::Approx(0.0452869409371321).epsilon(1e-8));
  CHECK(petz_renyi_mi(C1, C2, C, 0.5).value == doctest::Approx(0.0107835324318083).epsilon(1e-8));
}

TEST_CASE("Hermitian power") {
  const auto C = random_correlation(4, 3);
  const auto S = hermitian_power(C, 0.5, 0.0);
  CHECK((S * S - C).cwiseAbs().maxCoeff() < 1e-12);
}
