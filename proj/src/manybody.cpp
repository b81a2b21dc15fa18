#include "ness/manybody.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <vector>

#include "ness/error.hpp"

namespace ness {

using cdouble = std::complex<double>;

namespace {

void check_modes(int N) {
  if (N < 1 || N > 10) throw InvalidArgument("many-body reference supports 1..10 modes");
}

int popcount(unsigned x) { return std::popcount(x); }

}  // namespace

Eigen::MatrixXcd annihilation_operator(int j, int N) {
  check_modes(N);
  if (j < 0 || j >= N) throw InvalidArgument("mode index out of range");
  const unsigned D = 1u << N;
  const unsigned bit = 1u << (N - 1 - j);
  const unsigned before = ~((bit << 1) - 1) & (D - 1);  // bits of modes 0..j-1
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(D, D);
  for (unsigned s = 0; s < D; ++s) {
    if (!(s & bit)) continue;
    const double sign = (popcount(s & before) % 2) ? -1.0 : 1.0;
    c(s ^ bit, s) = sign;
  }
  return c;
}

Eigen::MatrixXcd gaussian_density_matrix(const Eigen::MatrixXcd& C) {
  const int N = static_cast<int>(C.rows());
  check_modes(N);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(C);
  const Eigen::VectorXd nu = es.eigenvalues();
  const Eigen::MatrixXcd& W = es.eigenvectors();
  const long D = 1L << N;
  std::vector<Eigen::MatrixXcd> c;
  for (int j = 0; j < N; ++j) c.push_back(annihilation_operator(j, N));
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(D, D);
  Eigen::MatrixXcd rho = I;
  for (int a = 0; a < N; ++a) {
    // d_a = sum_j W_ja c_j diagonalizes the correlations
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(D, D);
    for (int j = 0; j < N; ++j) d += W(j, a) * c[j];
    const Eigen::MatrixXcd num = d.adjoint() * d;
    const double x = std::clamp(nu[a], 0.0, 1.0);
    rho = rho * (x * num + (1.0 - x) * (I - num));
  }
  return rho;
}

Eigen::MatrixXcd correlation_from_density_matrix(const Eigen::MatrixXcd& rho, int N) {
  check_modes(N);
  std::vector<Eigen::MatrixXcd> c;
  for (int j = 0; j < N; ++j) c.push_back(annihilation_operator(j, N));
  Eigen::MatrixXcd C(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) C(i, j) = (rho * c[i].adjoint() * c[j]).trace();
  return C;
}

Eigen::MatrixXcd reduce_to_prefix(const Eigen::MatrixXcd& rho, int N, int n1) {
  const long d1 = 1L << n1, d2 = 1L << (N - n1);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d1, d1);
  for (long a = 0; a < d1; ++a)
    for (long b = 0; b < d1; ++b)
      for (long k = 0; k < d2; ++k) r(a, b) += rho(a * d2 + k, b * d2 + k);
  return r;
}

Eigen::MatrixXcd reduce_to_suffix(const Eigen::MatrixXcd& rho, int N, int n1) {
  const long d1 = 1L << n1, d2 = 1L << (N - n1);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d2, d2);
  for (long a = 0; a < d2; ++a)
    for (long b = 0; b < d2; ++b)
      for (long k = 0; k < d1; ++k) r(a, b) += rho(k * d2 + a, k * d2 + b);
  return r;
}

Eigen::MatrixXcd fermionic_partial_transpose(const Eigen::MatrixXcd& rho, int N, int n1) {
  check_modes(N);
  const long d2 = 1L << (N - n1), D = 1L << N;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(D, D);
  const cdouble phases[2] = {1.0, cdouble(0.0, 1.0)};
  for (long i = 0; i < D; ++i) {
    const long a = i / d2, b = i % d2;
    for (long j = 0; j < D; ++j) {
      const long ab = j / d2, bb = j % d2;
      const int tA = popcount(a) + popcount(ab);
      const int tB = popcount(b) + popcount(bb);
      cdouble ph = phases[tA % 2];
      if ((tA * tB) % 2) ph = -ph;
      out(ab * d2 + b, a * d2 + bb) += ph * rho(i, j);
    }
  }
  return out;
}

double density_matrix_renyi(const Eigen::MatrixXcd& rho, double n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : es.eigenvalues())
    if (p > 0.0) s += std::pow(p, n);
  return std::log(s) / (1.0 - n);
}

double density_matrix_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double p : es.eigenvalues())
    if (p > 0.0) s -= p * std::log(p);
  return s;
}

namespace {

// Tr[rho^n sigma^(1-n)] through Hermitian eigendecompositions.
double petz_trace(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma, double n) {
  auto power = [](const Eigen::MatrixXcd& m, double p) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m);
    Eigen::VectorXd w = es.eigenvalues();
    for (auto& x : w) x = x > 1e-300 ? std::pow(x, p) : 0.0;
    return Eigen::MatrixXcd(es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint());
  };
  return (power(rho, n) * power(sigma, 1.0 - n)).trace().real();
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd k(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

}  // namespace

BruteForceMeasures brute_force_measures(const Eigen::MatrixXcd& C12, int n1, double n, int n_even) {
  const int N = static_cast<int>(C12.rows());
  check_modes(N);
  if (n1 < 1 || n1 >= N) throw InvalidArgument("both subsystems must be nonempty");
  const Eigen::MatrixXcd rho = gaussian_density_matrix(C12);
  const Eigen::MatrixXcd r1 = reduce_to_prefix(rho, N, n1);
  const Eigen::MatrixXcd r2 = reduce_to_suffix(rho, N, n1);
  BruteForceMeasures m;
  m.S1 = density_matrix_entropy(r1);
  m.S2 = density_matrix_entropy(r2);
  m.S12 = density_matrix_entropy(rho);
  m.R1 = density_matrix_renyi(r1, n);
  m.R2 = density_matrix_renyi(r2, n);
  m.R12 = density_matrix_renyi(rho, n);
  m.mi = m.S1 + m.S2 - m.S12;
  m.rmi = m.R1 + m.R2 - m.R12;
  const Eigen::MatrixXcd prod = kron(r1, r2);
  m.prmi = std::log(petz_trace(rho, prod, n)) / (n - 1.0);
  const Eigen::MatrixXcd pt = fermionic_partial_transpose(rho, N, n1);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(pt);
  const Eigen::VectorXd sv = svd.singularValues();
  m.negativity = std::log(sv.sum());
  m.renyi_negativity = std::log(sv.array().pow(double(n_even)).sum());
  return m;
}

}  // namespace ness
