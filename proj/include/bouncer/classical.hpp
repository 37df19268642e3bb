#pragma once

// Classical bouncer: free fall from height x0 above a perfectly reflecting
// mirror at x = 0.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bouncer/errors.hpp"

namespace bouncer::classical {

struct BounceSpec {
  double x0 = 0.0;  // drop height
  double v0 = 0.0;  // initial velocity
  double g = 1.0;

  void validate() const {
    if (!(x0 >= 0.0) || !std::isfinite(x0)) throw DomainError("BounceSpec: x0 must be >= 0");
    if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("BounceSpec: g must be > 0");
    if (!std::isfinite(v0)) throw DomainError("BounceSpec: v0 must be finite");
  }
};

/// T = sqrt(2 x0 / g), time from the apex to mirror contact. The bounce
/// period is 2T.
inline double drop_time(const BounceSpec& spec) {
  spec.validate();
  return std::sqrt(2.0 * spec.x0 / spec.g);
}

inline double free_fall(const BounceSpec& spec, double t) {
  return spec.x0 + spec.v0 * t - 0.5 * spec.g * t * t;
}

inline double free_fall_velocity(const BounceSpec& spec, double t) { return spec.v0 - spec.g * t; }

namespace detail {
inline void require_rest_start(const BounceSpec& spec, const char* who) {
  spec.validate();
  if (spec.v0 != 0.0) {
    throw UnsupportedConfiguration(std::string(who) + ": only v0 = 0 bounce trains are supported");
  }
}
}  // namespace detail

/// Time since the most recent apex, folded into [0, T].
inline double time_from_apex(const BounceSpec& spec, double t) {
  const double T = drop_time(spec);
  if (T == 0.0) return 0.0;
  double tau = std::fmod(std::fabs(t), 2.0 * T);
  if (tau > T) tau = 2.0 * T - tau;
  return tau;
}

/// Elastic bounce train: the free-fall parabola folded with period 2T.
inline double bounce_trajectory(const BounceSpec& spec, double t) {
  detail::require_rest_start(spec, "bounce_trajectory");
  if (t < 0.0) throw DomainError("bounce_trajectory: t must be >= 0");
  if (spec.x0 == 0.0) return 0.0;
  const double tau = time_from_apex(spec, t);
  return std::clamp(spec.x0 - 0.5 * spec.g * tau * tau, 0.0, spec.x0);
}

/// Truncated Fourier series of the bounce train,
///   x(t) ~ (2/3) x0 - (4 x0 / pi^2) sum_{n=1}^{N} (-1)^n / n^2 cos(n pi t / T),
/// i.e. harmonics of the bounce period 2T with the apex at t = 0.
///
/// The commonly printed form  (2/3) x0 + (4 x0/pi^2) sum (-1)^n/n^2 cos(2 pi n t/T)
/// has the opposite sign on the sum (it yields x0/3 at the apex) and uses the
/// drop time as period; compared against the folded trajectory neither period
/// reproduces the bounce with that sign. See README, "Fourier convention".
inline double bounce_fourier(const BounceSpec& spec, double t, int n_terms) {
  detail::require_rest_start(spec, "bounce_fourier");
  if (n_terms < 1) throw DomainError("bounce_fourier: n_terms must be >= 1");
  if (spec.x0 == 0.0) return 0.0;
  const double T = drop_time(spec);
  const double w = std::numbers::pi * t / T;
  double sum = 0.0;
  for (int n = n_terms; n >= 1; --n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += sign / (double(n) * n) * std::cos(n * w);
  }
  return 2.0 / 3.0 * spec.x0 - 4.0 * spec.x0 / (std::numbers::pi * std::numbers::pi) * sum;
}

}  // namespace bouncer::classical
