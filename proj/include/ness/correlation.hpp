#pragma once

// Two-point correlation matrices <c_j^dagger c_m> of the steady state, either
// exact (infinite chain, finite distances) or in the long-range limit where
// every interval sits far from the impurity, and the 2x2 block symbols that
// generate the mirror-subsystem matrix.

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

#include "ness/physics.hpp"
#include "ness/quadrature.hpp"

namespace ness {

enum class CorrelationMode { Exact, LongRange };

const char* to_string(CorrelationMode mode);
CorrelationMode parse_correlation_mode(const std::string& s);

struct CorrelationMatrix {
  std::vector<long> sites;
  Eigen::MatrixXcd matrix;
  CorrelationMode mode = CorrelationMode::LongRange;

  long size() const { return static_cast<long>(sites.size()); }

  /// Principal submatrix on the given positions (indices into `sites`).
  CorrelationMatrix sub(const std::vector<long>& positions) const;

  /// Largest |C - C^dagger| entry.
  double hermiticity_defect() const;
};

/// Spec `quad` with the steady state's mandatory breakpoints merged in.
QuadratureSpec with_breakpoints(const QuadratureSpec& quad, const SteadyState& state);

/// <m|k> outside the impurity region.
cdouble scattering_wavefunction(long m, double k, const ScatteringModel& model,
                                const LatticeParams& params = {});

cdouble correlation_entry_exact(long j, long m, const SteadyState& state, const QuadratureSpec& quad);
cdouble correlation_entry_longrange(long j, long m, const SteadyState& state,
                                    const QuadratureSpec& quad);

/// Restricted correlation matrix on `sites` (kept in the given order).
CorrelationMatrix build_restricted_matrix(const std::vector<long>& sites, CorrelationMode mode,
                                          const SteadyState& state, const QuadratureSpec& quad);

/// Fourier table  int_a^b dk/2pi g(k) e^{-iqk}  for q = qmin..qmax.
Eigen::VectorXcd fourier_table(const std::function<cdouble(double)>& g, double a, double b,
                               long qmin, long qmax, const QuadratureSpec& quad);

/// 2x2 matrix-valued function on [-pi, pi] with its discontinuities.
struct BlockSymbol {
  std::function<Eigen::Matrix2cd(double)> eval;
  std::vector<double> breakpoints;
  std::string name;

  Eigen::Matrix2cd operator()(double k) const { return eval(k); }
};

Eigen::Matrix2cd block_symbol_phi(double k, const SteadyState& state);

/// diag(1 - e^{2 pi i gamma/n}, 1 + e^{-2 pi i gamma/n}) Phi(k).
Eigen::Matrix2cd block_symbol_phi_gamma(double k, double gamma, int n, const SteadyState& state);

BlockSymbol phi_symbol(const SteadyState& state);
BlockSymbol phi_gamma_symbol(const SteadyState& state, double gamma, int n);
/// Diagonal part of Phi: the symbol of C_1 (+) C_2 for the mirror pair.
BlockSymbol phi_cross_symbol(const SteadyState& state);

/// Block-Toeplitz matrix of `ell` x `ell` blocks, block (p,q) equal to
/// int dk/2pi symbol(k) e^{-i(p-q)k}.
Eigen::MatrixXcd block_toeplitz(const BlockSymbol& symbol, long ell, const QuadratureSpec& quad);

}  // namespace ness
