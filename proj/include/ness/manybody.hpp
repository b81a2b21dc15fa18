#pragma once

// Dense many-body reference for a handful of fermionic modes. The Gaussian
// density matrix is built explicitly in the Jordan-Wigner occupation basis
// (mode 0 is the most significant bit) and every measure is evaluated from
// its definition. Intended for N <= 6 modes.

#include <Eigen/Dense>

namespace ness {

/// Annihilation operator c_j on N modes.
Eigen::MatrixXcd annihilation_operator(int j, int N);

/// Gaussian state with <c_i^dagger c_j> = C_ij.
Eigen::MatrixXcd gaussian_density_matrix(const Eigen::MatrixXcd& C);

/// <c_i^dagger c_j> of a density matrix on N modes.
Eigen::MatrixXcd correlation_from_density_matrix(const Eigen::MatrixXcd& rho, int N);

/// Reduced state of the first n1 modes or of the last N - n1.
Eigen::MatrixXcd reduce_to_prefix(const Eigen::MatrixXcd& rho, int N, int n1);
Eigen::MatrixXcd reduce_to_suffix(const Eigen::MatrixXcd& rho, int N, int n1);

/// Fermionic partial transpose (partial time reversal) on the first n1 modes.
Eigen::MatrixXcd fermionic_partial_transpose(const Eigen::MatrixXcd& rho, int N, int n1);

double density_matrix_renyi(const Eigen::MatrixXcd& rho, double n);
double density_matrix_entropy(const Eigen::MatrixXcd& rho);

struct BruteForceMeasures {
  double S1 = 0, S2 = 0, S12 = 0;       // von Neumann
  double R1 = 0, R2 = 0, R12 = 0;       // Renyi of index n
  double mi = 0, rmi = 0, prmi = 0;
  double negativity = 0;
  double renyi_negativity = 0;          // index n_even
};

/// All measures between the first n1 modes and the rest of C12.
BruteForceMeasures brute_force_measures(const Eigen::MatrixXcd& C12, int n1, double n, int n_even);

}  // namespace ness
