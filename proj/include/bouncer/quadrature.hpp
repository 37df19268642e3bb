#pragma once

// Adaptive Gauss-Kronrod (7/15) quadrature on finite intervals.

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "bouncer/errors.hpp"

namespace bouncer::specfun {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  int max_subdivisions = 2000;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_subdivisions < 1) {
      throw DomainError("QuadratureSpec: tolerances must be > 0 and max_subdivisions >= 1");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

namespace detail {

// Kronrod abscissae on [0, 1]; odd indices are the 7-point Gauss nodes,
// index 7 is the centre.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
};

template <class F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {a, b, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Adaptive integration over the union of [breakpoints[i], breakpoints[i+1]].
/// Each initial segment is one panel; the panel with the largest error
/// estimate is bisected until the summed estimate meets
/// max(abs_tol, rel_tol * |value|). Throws NumericalFailure carrying the best
/// estimate when the panel count would exceed max_subdivisions.
template <class F>
QuadratureResult integrate_adaptive(F&& f, std::span<const double> breakpoints,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]) || !std::isfinite(breakpoints[i + 1]) ||
        !std::isfinite(breakpoints[i])) {
      throw DomainError("integrate: limits must be finite and strictly increasing");
    }
  }

  std::vector<detail::Panel> panels;
  panels.reserve(static_cast<std::size_t>(spec.max_subdivisions) + 1);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    panels.push_back(detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]));
  }

  for (;;) {
    double value = 0.0;
    double error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      value += panels[i].value;
      error += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    const int count = static_cast<int>(panels.size());
    if (error <= std::max(spec.abs_tol, spec.rel_tol * std::fabs(value))) {
      return {value, error, count};
    }
    const detail::Panel p = panels[worst];
    const double mid = 0.5 * (p.a + p.b);
    if (count + 1 > spec.max_subdivisions || !(p.a < mid && mid < p.b)) {
      throw NumericalFailure("integrate: subdivision limit reached (estimate " +
                                 std::to_string(value) + ", error bound " +
                                 std::to_string(error) + ")",
                             value, error);
    }
    panels[worst] = detail::gauss_kronrod_15(f, p.a, mid);
    panels.push_back(detail::gauss_kronrod_15(f, mid, p.b));
  }
}

template <class F>
double integrate_1d(F&& f, double a, double b, const QuadratureSpec& spec) {
  if (!(a < b)) throw DomainError("integrate_1d: require a < b");
  const std::array<double, 2> limits{a, b};
  return integrate_adaptive(f, limits, spec).value;
}

template <class F>
double integrate_1d(F&& f, std::span<const double> breakpoints, const QuadratureSpec& spec) {
  return integrate_adaptive(f, breakpoints, spec).value;
}

/// Integral over [a, inf). The upper limit is pushed out until |f| stays below
/// abs_tol / 100 on the last unit of the range; intended for integrands with
/// (super-)exponential decay.
template <class F>
double integrate_to_infinity(F&& f, double a, const QuadratureSpec& spec) {
  spec.validate();
  const double threshold = spec.abs_tol / 100.0;
  std::vector<double> breakpoints{a};
  double b = a;
  for (int i = 0; i < 4096; ++i) {
    b += 1.0;
    breakpoints.push_back(b);
    bool small = true;
    for (int j = 0; j < 4 && small; ++j) small = std::fabs(f(b - 0.25 * j)) < threshold;
    if (small) return integrate_1d(f, breakpoints, spec);
  }
  throw NumericalFailure("integrate_to_infinity: integrand does not decay");
}

}  // namespace bouncer::specfun
