#pragma once

// Momentous effective dynamics: the expectation values (x, p) together with
// the Weyl-ordered central moments
//   G^{a,b} = < (p^ - p)^a (x^ - x)^b >_Weyl,   2 <= a + b <= N,
// evolved by the Poisson-bracket flow of the effective Hamiltonian
//   H_Q = H(x, p) + sum 1/(a! b!) d^{a+b}H/dp^a dx^b G^{a,b}
// for H = p^2/2m + V(x) with polynomial V.
//
// Moments above the truncation order N are closed to zero. For potentials of
// degree <= 2 the hierarchy closes exactly at N = 2.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bouncer/classical.hpp"
#include "bouncer/errors.hpp"
#include "bouncer/scaling.hpp"

namespace bouncer::moments {

inline constexpr int kMaxPotentialDegree = 16;

/// V(x) = sum_k v_k x^k.
class PolynomialPotential {
 public:
  explicit PolynomialPotential(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
    if (static_cast<int>(coeffs_.size()) - 1 > kMaxPotentialDegree) {
      throw DomainError("PolynomialPotential: degree exceeds " + std::to_string(kMaxPotentialDegree));
    }
  }

  /// m g x
  static PolynomialPotential linear(double m, double g) { return PolynomialPotential({0.0, m * g}); }

  /// (m omega^2 / 2) x^2
  static PolynomialPotential harmonic(double m, double omega) {
    return PolynomialPotential({0.0, 0.0, 0.5 * m * omega * omega});
  }

  /// Degree of the polynomial; the zero polynomial reports 0.
  int degree() const noexcept { return coeffs_.empty() ? 0 : static_cast<int>(coeffs_.size()) - 1; }

  std::span<const double> coefficients() const noexcept { return coeffs_; }

  double operator()(double x) const { return derivative(0, x); }

  /// n-th derivative at x (Horner on the differentiated coefficients).
  double derivative(int n, double x) const {
    if (n < 0) throw DomainError("PolynomialPotential: negative derivative order");
    double result = 0.0;
    for (int k = static_cast<int>(coeffs_.size()) - 1; k >= n; --k) {
      double falling = 1.0;
      for (int j = 0; j < n; ++j) falling *= static_cast<double>(k - j);
      result = result * x + falling * coeffs_[static_cast<std::size_t>(k)];
    }
    return result;
  }

 private:
  std::vector<double> coeffs_;
};

/// (x, p) and the central moments G^{a,b} with 2 <= a + b <= order.
/// The same layout doubles as the time derivative of a state.
class MomentState {
 public:
  explicit MomentState(int order = 2) : order_(order) {
    if (order < 2) throw DomainError("MomentState: truncation order must be >= 2");
    g_.assign(slot(0, order) + static_cast<std::size_t>(order) + 1, 0.0);
  }

  double x = 0.0;
  double p = 0.0;

  int order() const noexcept { return order_; }

  /// G^{a,b} with the conventions G^{0,0} = 1, G^{1,0} = G^{0,1} = 0 and
  /// G^{a,b} = 0 above the truncation order.
  double G(int a, int b) const {
    check_indices(a, b);
    const int d = a + b;
    if (d == 0) return 1.0;
    if (d == 1 || d > order_) return 0.0;
    return g_[slot(a, b)];
  }

  void set_G(int a, int b, double value) {
    check_indices(a, b);
    const int d = a + b;
    if (d < 2 || d > order_) {
      throw DomainError("MomentState: G^{" + std::to_string(a) + "," + std::to_string(b) +
                        "} is outside orders 2.." + std::to_string(order_));
    }
    g_[slot(a, b)] = value;
  }

  /// Flat view of the stored moments, ordered by total degree then by a.
  std::span<double> raw() noexcept { return g_; }
  std::span<const double> raw() const noexcept { return g_; }

 private:
  static void check_indices(int a, int b) {
    if (a < 0 || b < 0) throw DomainError("MomentState: negative moment index");
  }

  // Degree d occupies d + 1 slots starting at d(d+1)/2 - 3.
  static std::size_t slot(int a, int b) {
    const int d = a + b;
    return static_cast<std::size_t>(d * (d + 1) / 2 - 3 + a);
  }

  int order_;
  std::vector<double> g_;
};

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline void require_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw DomainError("mass must be positive and finite");
}

}  // namespace detail

/// H_Q = p^2/2m + V(x) + G^{2,0}/2m + sum_{b>=2} V^{(b)}(x)/b! G^{0,b}.
inline double effective_hamiltonian(const MomentState& s, const PolynomialPotential& V, double m) {
  detail::require_mass(m);
  double h = s.p * s.p / (2.0 * m) + V(s.x) + s.G(2, 0) / (2.0 * m);
  const int top = std::min(s.order(), V.degree());
  for (int b = 2; b <= top; ++b) h += V.derivative(b, s.x) / detail::factorial(b) * s.G(0, b);
  return h;
}

/// Time derivative of every component of s:
///   dx/dt     = p/m
///   dp/dt     = -V'(x) - sum_{b>=2} V^{(b+1)}(x)/b! G^{0,b}
///   dG^{a,b}/dt = (b/m) G^{a+1,b-1}
///               + a sum_{n>=2} V^{(n)}(x)/(n-1)! [G^{0,n-1} G^{a-1,b} - G^{a-1,b+n-1}]
/// The kinetic sum in dx/dt vanishes because H is quadratic in p.
inline MomentState moment_eom(const MomentState& s, const PolynomialPotential& V, double m) {
  detail::require_mass(m);
  if (s.order() < 2) throw DomainError("moment_eom: truncation order must be >= 2");
  const int order = s.order();
  const int degree = V.degree();

  // V^{(n)}(x) / (n-1)! for n = 0..degree
  std::vector<double> scaled(static_cast<std::size_t>(degree) + 2, 0.0);
  for (int n = 1; n <= degree; ++n) scaled[static_cast<std::size_t>(n)] = V.derivative(n, s.x) / detail::factorial(n - 1);

  MomentState d(order);
  d.x = s.p / m;
  d.p = -V.derivative(1, s.x);
  for (int b = 2; b <= order && b + 1 <= degree; ++b) {
    d.p -= V.derivative(b + 1, s.x) / detail::factorial(b) * s.G(0, b);
  }

  for (int total = 2; total <= order; ++total) {
    for (int a = 0; a <= total; ++a) {
      const int b = total - a;
      double rate = (b > 0) ? b / m * s.G(a + 1, b - 1) : 0.0;
      if (a > 0) {
        double sum = 0.0;
        for (int n = 2; n <= degree; ++n) {
          sum += scaled[static_cast<std::size_t>(n)] * (s.G(0, n - 1) * s.G(a - 1, b) - s.G(a - 1, b + n - 1));
        }
        rate += a * sum;
      }
      d.set_G(a, b, rate);
    }
  }
  return d;
}

/// G^{0,2} G^{2,0} - (G^{1,1})^2, evaluated with fused multiply-adds so the
/// cancellation between the two products loses no extra digits.
inline double uncertainty_product(const MomentState& s) {
  const double g02 = s.G(0, 2);
  const double g20 = s.G(2, 0);
  const double g11 = s.G(1, 1);
  const double square = g11 * g11;
  const double square_error = std::fma(g11, g11, -square);
  return std::fma(g02, g20, -square) - square_error;
}

struct TrajectoryPoint {
  double t = 0.0;
  MomentState state;
};

struct MomentTrajectory {
  std::vector<TrajectoryPoint> points;
  /// Set when the generalized uncertainty relation was violated by more
  /// than 1e-6 hbar^2/4 at some output time (possible under truncation).
  std::optional<std::string> integrity_warning;
};

namespace detail {

// y + h * k, component-wise.
inline MomentState shifted(const MomentState& y, const MomentState& k, double h) {
  MomentState out = y;
  out.x += h * k.x;
  out.p += h * k.p;
  auto dst = out.raw();
  auto src = k.raw();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += h * src[i];
  return out;
}

// Adds `increment` to `value` with Kahan compensation carried in `carry`.
inline void compensated_add(double& value, double& carry, double increment) {
  const double y = increment - carry;
  const double t = value + y;
  carry = (t - value) - y;
  value = t;
}

}  // namespace detail

/// Classical fixed-step fourth-order Runge-Kutta integration of moment_eom
/// from t = 0 to t_end, one output point per step (the last step is
/// shortened to land on t_end). State updates use compensated summation.
/// Pass hbar > 0 to enable the uncertainty-relation integrity check.
inline MomentTrajectory integrate(const MomentState& s0, const PolynomialPotential& V, double m,
                                  double t_end, double dt, double hbar = 0.0) {
  detail::require_mass(m);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("integrate: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw DomainError("integrate: t_end must be >= 0");

  const auto steps = static_cast<long long>(std::ceil(t_end / dt * (1.0 - 1e-12)));
  MomentTrajectory out;
  out.points.reserve(static_cast<std::size_t>(steps) + 1);
  out.points.push_back({0.0, s0});

  const double floor = 0.25 * hbar * hbar * (1.0 - 1e-6);
  auto check = [&](double t, const MomentState& s) {
    if (hbar > 0.0 && !out.integrity_warning && uncertainty_product(s) < floor) {
      out.integrity_warning = "uncertainty relation violated at t = " + std::to_string(t);
    }
  };
  check(0.0, s0);

  MomentState y = s0;
  MomentState carry(s0.order());
  double t = 0.0;
  for (long long step = 1; step <= steps; ++step) {
    const double t_next = (step == steps) ? t_end : static_cast<double>(step) * dt;
    const double h = t_next - t;
    const MomentState k1 = moment_eom(y, V, m);
    const MomentState k2 = moment_eom(detail::shifted(y, k1, 0.5 * h), V, m);
    const MomentState k3 = moment_eom(detail::shifted(y, k2, 0.5 * h), V, m);
    const MomentState k4 = moment_eom(detail::shifted(y, k3, h), V, m);

    auto increment = [&](double a, double b, double c, double d) { return h / 6.0 * (a + 2.0 * b + 2.0 * c + d); };
    detail::compensated_add(y.x, carry.x, increment(k1.x, k2.x, k3.x, k4.x));
    detail::compensated_add(y.p, carry.p, increment(k1.p, k2.p, k3.p, k4.p));
    auto g = y.raw();
    auto c = carry.raw();
    for (std::size_t i = 0; i < g.size(); ++i) {
      detail::compensated_add(g[i], c[i], increment(k1.raw()[i], k2.raw()[i], k3.raw()[i], k4.raw()[i]));
    }

    t = t_next;
    out.points.push_back({t, y});
    check(t, y);
  }
  return out;
}

/// Initial second moments G^{2,0}(0) = c0, G^{1,1}(0) = c1, G^{0,2}(0) = c2.
struct SecondMoments {
  double c0 = 0.0;  // momentum^2
  double c1 = 0.0;  // momentum * length
  double c2 = 0.0;  // length^2
};

/// Uncorrelated initial moments that saturate the uncertainty relation:
/// c1 = 0, c2 = alpha l_g^2, c0 = hbar^2 / (4 c2).
struct SaturatedIC {
  double alpha = 1.0;
  SecondMoments moments;
};

inline SaturatedIC saturated_ic(double alpha, const UnitSystem& u) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("saturated_ic: alpha must be > 0");
  const double l = u.length_scale();
  const double c2 = alpha * l * l;
  return {alpha, {u.hbar() * u.hbar() / (4.0 * c2), 0.0, c2}};
}

struct SecondMomentValues {
  double g20 = 0.0;
  double g11 = 0.0;
  double g02 = 0.0;
};

/// Exact second moments under V = m g x:
///   G^{2,0} = c0,  G^{1,1} = c0 t/m + c1,  G^{0,2} = c0 t^2/m^2 + 2 c1 t/m + c2.
inline SecondMomentValues closed_form_linear(const SecondMoments& c, double m, double t) {
  detail::require_mass(m);
  if (!(t >= 0.0)) throw DomainError("closed_form_linear: t must be >= 0");
  const double rate = c.c0 / m;
  return {c.c0, rate * t + c.c1, (rate / m * t + 2.0 * c.c1 / m) * t + c.c2};
}

inline SecondMomentValues closed_form_linear(const SaturatedIC& ic, double m, double t) {
  return closed_form_linear(ic.moments, m, t);
}

/// Second-order moment state at position x, momentum p.
inline MomentState make_state(double x, double p, const SecondMoments& c, int order = 2) {
  MomentState s(order);
  s.x = x;
  s.p = p;
  s.set_G(2, 0, c.c0);
  s.set_G(1, 1, c.c1);
  s.set_G(0, 2, c.c2);
  return s;
}

enum class EnvelopeMode {
  /// The dispersion clock runs from t = 0 across all bounces.
  Continuous,
  /// The dispersion clock restarts at every apex of the bounce train.
  ResetEachPeriod,
};

struct Envelope {
  double lower = 0.0;
  double upper = 0.0;
  double half_width() const { return 0.5 * (upper - lower); }
};

/// x_cl(t) -/+ sqrt(G^{0,2}(t)) around the folded classical bounce released
/// at rest from x0, with G^{0,2} from the exact linear-potential solution.
inline Envelope envelope(double x0, const SaturatedIC& ic, double m, double g, double t,
                         EnvelopeMode mode = EnvelopeMode::Continuous) {
  const classical::BounceSpec spec{x0, 0.0, g};
  const double centre = classical::bounce_trajectory(spec, t);
  double clock = t;
  if (mode == EnvelopeMode::ResetEachPeriod) {
    const double period = 2.0 * classical::drop_time(spec);
    if (period > 0.0) clock = std::fmod(t, period);
  }
  const double width = std::sqrt(closed_form_linear(ic, m, clock).g02);
  return {centre - width, centre + width};
}

}  // namespace bouncer::moments
