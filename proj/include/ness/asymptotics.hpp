#pragma once

// Leading-order (volume-law) asymptotics of entanglement measures between two
// intervals on opposite sides of the impurity, as one-dimensional momentum
// integrals over the reservoir occupations and the transmission probability.

#include "ness/measures.hpp"
#include "ness/physics.hpp"
#include "ness/quadrature.hpp"

namespace ness {

struct BiasContext {
  SteadyState state;
  QuadratureSpec quad;
};

/// `density` is the coefficient of the natural length (ell_mirror for
/// correlation measures and the Renyi negativity, ell for single intervals,
/// |A_L| + |A_R| for the combined entropy); `total` is the leading-order value.
struct AsymptoticValue {
  double density = 0.0;
  double total = 0.0;
  MeasureKind kind = MeasureKind::MutualInformation;
  double n = 1.0;
};

/// Renyi mutual information. Any real n != 1 is accepted; for n <= 0 a mode
/// with occupation exactly 0 or 1 contributes nothing.
AsymptoticValue rmi_asymptotic(const BiasContext& ctx, double n, long ell_mirror);
AsymptoticValue mi_asymptotic(const BiasContext& ctx, long ell_mirror);
AsymptoticValue prmi_asymptotic(const BiasContext& ctx, double n, long ell_mirror);
AsymptoticValue negativity_asymptotic(const BiasContext& ctx, long ell_mirror);

/// n == 1 selects the von Neumann entropy in the three entropy functions.
AsymptoticValue interval_entropy_asymptotic(const BiasContext& ctx, Side side, double n, long ell);
AsymptoticValue combined_entropy_asymptotic(const BiasContext& ctx, const SubsystemPair& geom, double n);
AsymptoticValue mirror_entropy_asymptotic(const BiasContext& ctx, double n, long ell_mirror);

/// Renyi negativity for even n; density is the coefficient of ell_mirror.
AsymptoticValue renyi_negativity_asymptotic(const BiasContext& ctx, const SubsystemPair& geom, int n);

/// Four-term auxiliary function of the Renyi negativity (real n).
double negativity_polynomial(double n, double fL, double fR, double T);

/// ln(x^n + (1-x)^n) with 0^n taken as 0.
double log_power_sum(double x, double n);

/// Entropy kernel: binary entropy for n == 1, else log_power_sum / (1 - n).
double entropy_kernel(double x, double n);

/// Integrands per unit momentum (without the 1/2pi), exposed for tests.
double rmi_integrand(double n, double fL, double fR, double T);
double mi_integrand(double fL, double fR, double T);
double prmi_integrand(double n, double fL, double fR, double T);
double negativity_integrand(double fL, double fR, double T);

}  // namespace ness
