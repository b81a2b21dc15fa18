#include <doctest.h>

#include <cmath>

#include "common.hpp"
#include "ness/correlation.hpp"
#include "ness/error.hpp"
#include "ness/manybody.hpp"
#include "ness/measures.hpp"

using namespace ness;
using testing_util::random_correlation;

TEST_CASE("canonical anticommutation relations") {
  const int N = 3;
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) {
      const auto ci = annihilation_operator(i, N), cj = annihilation_operator(j, N);
      const Eigen::MatrixXcd ac = ci * cj.adjoint() + cj.adjoint() * ci;
      const Eigen::MatrixXcd expect = (i == j ? 1.0 : 0.0) * Eigen::MatrixXcd::Identity(8, 8);
      CHECK((ac - expect).cwiseAbs().maxCoeff() < 1e-15);
      CHECK((ci * cj + cj * ci).cwiseAbs().maxCoeff() < 1e-15);
    }
  CHECK_THROWS_AS(annihilation_operator(3, 3), InvalidArgument);
  CHECK_THROWS_AS(annihilation_operator(0, 11), InvalidArgument);
}

TEST_CASE("Gaussian density matrix reproduces its correlations") {
  const auto C = random_correlation(3, 17);
  const auto rho = gaussian_density_matrix(C);
  CHECK(std::abs(rho.trace() - 1.0) < 1e-13);
  CHECK((correlation_from_density_matrix(rho, 3) - C).cwiseAbs().maxCoeff() < 1e-13);
  const auto r1 = reduce_to_prefix(rho, 3, 1);
  CHECK((correlation_from_density_matrix(r1, 1) - C.topLeftCorner(1, 1)).cwiseAbs().maxCoeff() < 1e-13);
  const auto r2 = reduce_to_suffix(rho, 3, 1);
  CHECK((correlation_from_density_matrix(r2, 2) - C.bottomRightCorner(2, 2)).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("spectral formulas agree with many-body matrices") {
  std::vector<std::pair<Eigen::MatrixXcd, int>> cases;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    cases.push_back({random_correlation(3, seed), 1});
    cases.push_back({random_correlation(3, seed + 10), 2});
    cases.push_back({random_correlation(2, seed + 20), 1});
  }
  const auto s = testing_util::rlm(1.0, 0.5, 2.0, -0.5, 0.5);
  cases.push_back({build_restricted_matrix({-3, 1, 2}, CorrelationMode::Exact, s, QuadratureSpec{}).matrix, 1});
  for (const auto& [C, n1] : cases) {
    const long N = C.rows();
    const Eigen::MatrixXcd C1 = C.topLeftCorner(n1, n1), C2 = C.bottomRightCorner(N - n1, N - n1);
    for (double n : {0.5, 2.0, 3.0}) {
      const auto bf = brute_force_measures(C, n1, n, 4);
      CHECK(std::abs(von_neumann_entropy(C1).value - bf.S1) < 1e-8);
      CHECK(std::abs(von_neumann_entropy(C2).value - bf.S2) < 1e-8);
      CHECK(std::abs(von_neumann_entropy(C).value - bf.S12) < 1e-8);
      CHECK(std::abs(renyi_entropy(C1, n).value - bf.R1) < 1e-8);
      CHECK(std::abs(mutual_information(C1, C2, C).value - bf.mi) < 1e-8);
      CHECK(std::abs(renyi_mutual_information(C1, C2, C, n).value - bf.rmi) < 1e-8);
      CHECK(std::abs(petz_renyi_mi(C1, C2, C, n).value - bf.prmi) < 1e-8);
      CHECK(std::abs(fermionic_negativity(C, n1).value - bf.negativity) < 1e-8);
      CHECK(std::abs(renyi_negativity(C, n1, 4).value - bf.renyi_negativity) < 1e-8);
    }
  }
}

TEST_CASE("partial transpose of a product state has unit trace norm") {
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = 0.3;
  D.bottomRightCorner(2, 2) = random_correlation(2, 6);
  const auto rho = gaussian_density_matrix(D);
  const auto pt = fermionic_partial_transpose(rho, 3, 1);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pt);
  CHECK(svd.singularValues().sum() == doctest::Approx(1.0).epsilon(1e-12));
}
