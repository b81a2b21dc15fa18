#include "ness/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include "ness/correlation.hpp"
#include "ness/error.hpp"

namespace ness {

namespace {

double unit(double x) { return std::clamp(x, 0.0, 1.0); }

double pow0(double x, double n) { return x <= 0.0 ? 0.0 : std::pow(x, n); }

// a^n / b^(n-1), continuous extension when a vanishes.
double ratio_power(double a, double b, double n) {
  if (a <= 0.0) return 0.0;
  return std::exp(n * std::log(a) - (n - 1.0) * std::log(std::max(b, 1e-300)));
}

// int_0^pi dk/2pi g(fL, fR, T) with the steady state's breakpoints.
template <class G>
double momentum_integral(const BiasContext& ctx, const G& g) {
  const auto q = with_breakpoints(ctx.quad, ctx.state);
  auto f = [&](double k) {
    return g(ctx.state.f_L(k), ctx.state.f_R(k), ctx.state.model.transmission(k)) / (2.0 * kPi);
  };
  return integrate<double>(f, 0.0, kPi, q).value;
}

void require_nonneg(long ell, const char* what) {
  if (ell < 0) throw InvalidArgument(std::string(what) + " must be >= 0");
}

void require_renyi(double n) {
  if (!(n > 0.0) || n == 1.0 || !std::isfinite(n))
    throw InvalidArgument("Renyi index must be positive and different from 1");
}

}  // namespace

double log_power_sum(double x, double n) {
  x = unit(x);
  return std::log(pow0(x, n) + pow0(1.0 - x, n));
}

double entropy_kernel(double x, double n) {
  x = unit(x);
  if (n == 1.0) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    return -x * std::log(x) - (1.0 - x) * std::log1p(-x);
  }
  return log_power_sum(x, n) / (1.0 - n);
}

double rmi_integrand(double n, double fL, double fR, double T) {
  if (fL == fR) return 0.0;
  const double R = 1.0 - T;
  return entropy_kernel(T * fL + R * fR, n) + entropy_kernel(R * fL + T * fR, n) -
         entropy_kernel(fL, n) - entropy_kernel(fR, n);
}

double mi_integrand(double fL, double fR, double T) { return rmi_integrand(1.0, fL, fR, T); }

double prmi_integrand(double n, double fL, double fR, double T) {
  if (fL == fR) return 0.0;
  const double R = 1.0 - T;
  const double A = unit(T * fL + R * fR), B = unit(R * fL + T * fR);
  auto pair = [n](double f, double x) { return ratio_power(f, x, n) + ratio_power(1.0 - f, 1.0 - x, n); };
  const double s = T * pair(fL, A) * pair(fR, B) + R * pair(fL, B) * pair(fR, A);
  return std::log(s) / (n - 1.0);
}

double negativity_integrand(double fL, double fR, double T) {
  const double R = 1.0 - T;
  const double u = 1.0 - fL - fR + 2.0 * fL * fR;
  const double d = fL - fR;
  return std::log(fL + fR - 2.0 * fL * fR + std::sqrt(u * u + 4.0 * T * R * d * d));
}

double negativity_polynomial(double n, double fL, double fR, double T) {
  const double R = 1.0 - T;
  const double p = fL * fR;
  const double h = 0.5 * (1.0 - fL - fR + 2.0 * p);
  const double c = 0.5 * (1.0 - fL - fR);
  const double s = std::sqrt(h * h + T * R * (fL - fR) * (fL - fR));
  return pow0(T * fL + R * fR - p, n) + pow0(R * fL + T * fR - p, n) + pow0(s + c, n) + pow0(s - c, n);
}

AsymptoticValue rmi_asymptotic(const BiasContext& ctx, double n, long ell_mirror) {
  require_nonneg(ell_mirror, "ell_mirror");
  if (n == 1.0 || !std::isfinite(n)) throw InvalidArgument("RMI index must be finite and != 1");
  AsymptoticValue v;
  v.kind = MeasureKind::RenyiMutualInformation;
  v.n = n;
  v.density = momentum_integral(ctx, [n](double a, double b, double T) { return rmi_integrand(n, a, b, T); });
  v.total = v.density * ell_mirror;
  return v;
}

AsymptoticValue mi_asymptotic(const BiasContext& ctx, long ell_mirror) {
  require_nonneg(ell_mirror, "ell_mirror");
  AsymptoticValue v;
  v.kind = MeasureKind::MutualInformation;
  v.density = momentum_integral(ctx, mi_integrand);
  v.total = v.density * ell_mirror;
  return v;
}

AsymptoticValue prmi_asymptotic(const BiasContext& ctx, double n, long ell_mirror) {
  require_nonneg(ell_mirror, "ell_mirror");
  require_renyi(n);
  AsymptoticValue v;
  v.kind = MeasureKind::PetzRenyiMutualInformation;
  v.n = n;
  v.density = momentum_integral(ctx, [n](double a, double b, double T) { return prmi_integrand(n, a, b, T); });
  if (!std::isfinite(v.density)) throw NumericalError("PRMI integrand is not finite");
  v.total = v.density * ell_mirror;
  return v;
}

AsymptoticValue negativity_asymptotic(const BiasContext& ctx, long ell_mirror) {
  require_nonneg(ell_mirror, "ell_mirror");
  AsymptoticValue v;
  v.kind = MeasureKind::Negativity;
  v.density = momentum_integral(ctx, negativity_integrand);
  v.total = v.density * ell_mirror;
  return v;
}

AsymptoticValue interval_entropy_asymptotic(const BiasContext& ctx, Side side, double n, long ell) {
  if (ell < 1) throw InvalidArgument("interval length must be >= 1");
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("Renyi index must be positive");
  AsymptoticValue v;
  v.kind = n == 1.0 ? MeasureKind::VonNeumann : MeasureKind::Renyi;
  v.n = n;
  v.density = momentum_integral(ctx, [n, side](double fL, double fR, double T) {
    const double R = 1.0 - T;
    return side == Side::Left ? entropy_kernel(fL, n) + entropy_kernel(R * fL + T * fR, n)
                              : entropy_kernel(fR, n) + entropy_kernel(T * fL + R * fR, n);
  });
  v.total = v.density * ell;
  return v;
}

AsymptoticValue combined_entropy_asymptotic(const BiasContext& ctx, const SubsystemPair& geom, double n) {
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("Renyi index must be positive");
  const double lm = static_cast<double>(mirror_overlap_length(geom));
  const double wL = geom.ell_L + lm, wR = geom.ell_R + lm;
  const double dL = geom.ell_L - lm, dR = geom.ell_R - lm;
  AsymptoticValue v;
  v.kind = n == 1.0 ? MeasureKind::VonNeumann : MeasureKind::Renyi;
  v.n = n;
  v.total = momentum_integral(ctx, [=](double fL, double fR, double T) {
    const double R = 1.0 - T;
    return wL * entropy_kernel(fL, n) + wR * entropy_kernel(fR, n) +
           dL * entropy_kernel(R * fL + T * fR, n) + dR * entropy_kernel(T * fL + R * fR, n);
  });
  v.density = v.total / static_cast<double>(geom.ell_L + geom.ell_R);
  return v;
}

AsymptoticValue mirror_entropy_asymptotic(const BiasContext& ctx, double n, long ell_mirror) {
  require_nonneg(ell_mirror, "ell_mirror");
  if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("Renyi index must be positive");
  AsymptoticValue v;
  v.kind = n == 1.0 ? MeasureKind::VonNeumann : MeasureKind::Renyi;
  v.n = n;
  // int_{-pi}^{pi} dk/pi h(f~) = 2 int_0^pi dk/2pi [h(fL) + h(fR)]
  v.density = 2.0 * momentum_integral(ctx, [n](double fL, double fR, double) {
                return entropy_kernel(fL, n) + entropy_kernel(fR, n);
              });
  v.total = v.density * ell_mirror;
  return v;
}

AsymptoticValue renyi_negativity_asymptotic(const BiasContext& ctx, const SubsystemPair& geom, int n) {
  if (n < 2 || n % 2 != 0) throw InvalidArgument("Renyi negativity needs an even index n >= 2");
  const double lm = static_cast<double>(mirror_overlap_length(geom));
  const double lL = geom.ell_L, lR = geom.ell_R;
  const double dL = lL - lm, dR = lR - lm;
  const double nn = n;
  AsymptoticValue v;
  v.kind = MeasureKind::RenyiNegativity;
  v.n = n;
  v.density = momentum_integral(ctx, [nn](double fL, double fR, double T) {
    return std::log(negativity_polynomial(nn, fL, fR, T));
  });
  const double rest = momentum_integral(ctx, [=](double fL, double fR, double T) {
    const double R = 1.0 - T;
    return lL * log_power_sum(fL, nn) + lR * log_power_sum(fR, nn) +
           dL * log_power_sum(R * fL + T * fR, nn) + dR * log_power_sum(T * fL + R * fR, nn);
  });
  v.total = lm * v.density + rest;
  return v;
}

}  // namespace ness
