#pragma once

#include <Eigen/Dense>

#include <random>

#include "ness/physics.hpp"

namespace testing_util {

inline ness::SteadyState rlm(double eps0, double mu_L, double T_L, double mu_R, double T_R) {
  return {ness::resonant_level(eps0), ness::ReservoirPair{mu_L, T_L, mu_R, T_R}, ness::LatticeParams{}};
}

inline ness::SubsystemPair geometry(long d_L, long ell_L, long d_R, long ell_R, int m0 = 0) {
  ness::SubsystemPair g;
  g.d_L = d_L;
  g.ell_L = ell_L;
  g.d_R = d_R;
  g.ell_R = ell_R;
  g.m0 = m0;
  return g;
}

// Random valid correlation matrix: random unitary, spectrum uniform in (0, 1).
inline Eigen::MatrixXcd random_correlation(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.02, 0.98);
  Eigen::MatrixXcd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = {g(rng), g(rng)};
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(A);
  const Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::VectorXcd nu(n);
  for (int i = 0; i < n; ++i) nu[i] = u(rng);
  return Q * nu.asDiagonal() * Q.adjoint();
}

}  // namespace testing_util
