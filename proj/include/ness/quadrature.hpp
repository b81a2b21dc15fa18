#pragma once

// Globally adaptive composite Gauss-Legendre quadrature on [a, b].
//
// Each panel is integrated with a 15-point rule, and its error is estimated by
// comparing against the two half panels. The panel with the largest error is
// bisected until the summed error is below the requested absolute tolerance.
// Values may be scalars or Eigen vectors (error measured in the max norm).

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "ness/error.hpp"

namespace ness {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 24;               // bisection cap before frequency scaling
  std::vector<double> breakpoints;  // interior points where integrands jump
  long max_panels = 1 << 16;

  void validate() const {
    if (!(abs_tol > 0.0)) throw InvalidArgument("quadrature tolerance must be positive");
    if (max_depth < 1) throw InvalidArgument("quadrature depth must be >= 1");
  }
};

template <class T>
struct QuadratureResult {
  T value;
  double error = 0.0;
  long panels = 0;
};

namespace detail {

struct GaussLegendre15 {
  std::array<double, 15> x{};
  std::array<double, 15> w{};
};

const GaussLegendre15& gauss_legendre_15();

inline double max_abs(double v) { return std::abs(v); }
inline double max_abs(std::complex<double> v) { return std::abs(v); }
template <class Derived>
double max_abs(const Eigen::MatrixBase<Derived>& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

template <class T, class F>
T gl15(const F& f, double a, double b) {
  const auto& r = gauss_legendre_15();
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  T s = f(c + h * r.x[0]) * r.w[0];
  for (int i = 1; i < 15; ++i) s += f(c + h * r.x[i]) * r.w[i];
  return s * h;
}

}  // namespace detail

/// Integrate f over [a, b]. `frequency` is the largest Fourier index present
/// in the integrand; it raises the depth cap by log2(1 + |frequency|).
template <class T, class F>
QuadratureResult<T> integrate(const F& f, double a, double b, const QuadratureSpec& spec,
                              long frequency = 0) {
  spec.validate();
  if (!(b > a)) throw InvalidArgument("integration interval must have b > a");
  const int depth_cap =
      spec.max_depth + static_cast<int>(std::ceil(std::log2(1.0 + std::abs(double(frequency)))));

  struct Panel {
    double a, b;
    T whole;   // refined estimate (sum of halves)
    T left, right;
    double err;
    int depth;
  };
  auto make = [&](double lo, double hi, int depth, const T& coarse) {
    const double mid = 0.5 * (lo + hi);
    T l = detail::gl15<T>(f, lo, mid);
    T r = detail::gl15<T>(f, mid, hi);
    T s = l + r;
    const double err = detail::max_abs(T(coarse - s));
    return Panel{lo, hi, s, l, r, err, depth};
  };

  std::vector<double> cuts{a};
  for (double p : spec.breakpoints)
    if (p > a && p < b) cuts.push_back(p);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto cmp = [](const Panel& x, const Panel& y) { return x.err < y.err; };
  std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> heap(cmp);
  double total_err = 0.0;
  // Start from a handful of panels per piece so that short oscillatory
  // integrands are not accepted from a single lucky estimate.
  const long nstart = std::clamp<long>(std::abs(frequency) / 4 + 1, 1, 512);
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double width = cuts[i + 1] - cuts[i];
    const long m = std::max<long>(1, std::lround(nstart * width / (b - a) + 0.5));
    for (long j = 0; j < m; ++j) {
      const double lo = cuts[i] + width * j / m;
      const double hi = (j + 1 == m) ? cuts[i + 1] : cuts[i] + width * (j + 1) / m;
      Panel p = make(lo, hi, 0, detail::gl15<T>(f, lo, hi));
      total_err += p.err;
      heap.push(std::move(p));
    }
  }

  auto sum_all = [&]() {
    auto copy = heap;
    T s = copy.top().whole;
    copy.pop();
    while (!copy.empty()) {
      s += copy.top().whole;
      copy.pop();
    }
    return s;
  };

  long panels = static_cast<long>(heap.size());
  for (;;) {
    if (total_err <= spec.abs_tol) break;
    const Panel& worst = heap.top();
    // roundoff floor: the worst panel cannot be improved any further
    if (worst.err <= 64.0 * std::numeric_limits<double>::epsilon() *
                         std::max(1.0, detail::max_abs(worst.whole)))
      break;
    if (worst.depth >= depth_cap || panels >= spec.max_panels) {
      const T s = sum_all();
      std::ostringstream os;
      os << "quadrature did not converge on [" << a << ", " << b << "]: error " << total_err
         << " > " << spec.abs_tol;
      throw QuadratureError(os.str(), detail::max_abs(s), total_err);
    }
    Panel p = worst;
    heap.pop();
    total_err -= p.err;
    const double mid = 0.5 * (p.a + p.b);
    Panel l = make(p.a, mid, p.depth + 1, p.left);
    Panel r = make(mid, p.b, p.depth + 1, p.right);
    total_err += l.err + r.err;
    heap.push(std::move(l));
    heap.push(std::move(r));
    ++panels;
    // Recompute the running sum occasionally to shed accumulated rounding.
    if (panels % 1024 == 0) {
      total_err = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        total_err += copy.top().err;
        copy.pop();
      }
    }
  }
  return {sum_all(), total_err, panels};
}

/// Convenience wrapper returning only the value.
template <class T, class F>
T integrate_value(const F& f, double a, double b, const QuadratureSpec& spec, long frequency = 0) {
  return integrate<T>(f, a, b, spec, frequency).value;
}

}  // namespace ness
