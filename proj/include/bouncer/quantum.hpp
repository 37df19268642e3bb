#pragma once

// Quantum bouncer on the half-line x >= 0 with a Dirichlet mirror at x = 0.
//
// Eigenstates are psi_n(y) = N_n Ai(y - x_n) in the scaled coordinate
// y = x / l_g, with x_n the n-th zero of Ai(-x) and N_n = 1 / |Ai'(-x_n)|.
// States are expanded over the first n_max eigenstates and evolved by phase
// multiplication. Level n is stored at index n - 1 throughout.

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "bouncer/classical.hpp"
#include "bouncer/errors.hpp"
#include "bouncer/scaling.hpp"
#include "bouncer/specfun.hpp"

namespace bouncer::quantum {

using specfun::QuadratureSpec;

/// Quadrature settings used for basis matrix elements unless overridden.
inline QuadratureSpec default_basis_quadrature() { return {1e-11, 1e-11, 4000}; }

/// Distance beyond the last classical turning point at which eigenfunctions
/// are treated as zero (Ai(20) ~ 2e-27).
inline constexpr double kEvanescentTail = 20.0;
inline constexpr double kNormalizationTolerance = 1e-8;
inline constexpr double kMaxTruncationLoss = 1e-3;
inline constexpr double kMaxClippedMass = 1e-6;

namespace detail {

inline std::vector<double> unit_breakpoints(double a, double b) {
  std::vector<double> points{a};
  for (double p = std::floor(a) + 1.0; p < b; p += 1.0) {
    if (p > a) points.push_back(p);
  }
  points.push_back(b);
  return points;
}

}  // namespace detail

class Eigenbasis {
 public:
  int n_max() const noexcept { return static_cast<int>(zeros_.size()); }
  const UnitSystem& units() const noexcept { return units_; }

  /// Scaled zeros x_n (ascending).
  std::span<const double> zeros() const noexcept { return zeros_; }
  /// E_n = m g l_g x_n.
  std::span<const double> energies() const noexcept { return energies_; }
  std::span<const double> norms() const noexcept { return norms_; }

  /// Scaled eigenfunction psi_{i+1}(y), unit norm in y.
  double psi(int i, double y) const {
    return norms_[static_cast<std::size_t>(i)] * specfun::airy_ai(y - zeros_[static_cast<std::size_t>(i)]);
  }

  /// Position matrix element <i+1| x |j+1> in length units.
  double x_element(int i, int j) const { return x_matrix_[index(i, j)]; }
  std::span<const double> x_matrix() const noexcept { return x_matrix_; }

  /// <i+1| x^2 |j+1> in length^2 units; computed on first use.
  std::span<const double> x2_matrix(const QuadratureSpec& quad) const {
    std::call_once(x2_cache_->once, [&] { x2_cache_->values = moment_matrix(2, quad, "x2_matrix"); });
    return x2_cache_->values;
  }

  /// Upper end of the scaled integration range for a pair of levels.
  double support_end(int i, int j) const {
    return std::max(zeros_[static_cast<std::size_t>(i)], zeros_[static_cast<std::size_t>(j)]) +
           kEvanescentTail;
  }

  friend Eigenbasis build_basis(int n_max, const UnitSystem& u, const QuadratureSpec& quad);

 private:
  explicit Eigenbasis(const UnitSystem& u) : units_(u), x2_cache_(std::make_shared<Cache>()) {}

  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(i) * zeros_.size() + static_cast<std::size_t>(j);
  }

  // Symmetric matrix of <i| x^power |j>, in (length)^power units.
  std::vector<double> moment_matrix(int power, const QuadratureSpec& quad, const char* name) const {
    const int n = n_max();
    const double scale = std::pow(units_.length_scale(), power);
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const auto points = detail::unit_breakpoints(0.0, support_end(i, j));
        auto integrand = [&](double y) { return std::pow(y, power) * psi(i, y) * psi(j, y); };
        double value = 0.0;
        try {
          value = specfun::integrate_1d(integrand, points, quad);
        } catch (const NumericalFailure& e) {
          throw NumericalFailure(std::string(name) + " entry (" + std::to_string(i + 1) + ", " +
                                     std::to_string(j + 1) + "): " + e.what(),
                                 e.best_estimate(), e.error_bound());
        }
        out[index(i, j)] = out[index(j, i)] = value * scale;
      }
    }
    return out;
  }

  struct Cache {
    std::once_flag once;
    std::vector<double> values;
  };

  UnitSystem units_;
  std::vector<double> zeros_;
  std::vector<double> energies_;
  std::vector<double> norms_;
  std::vector<double> x_matrix_;
  std::shared_ptr<Cache> x2_cache_;
};

/// Builds the first n_max eigenstates. Each N_n is checked against a
/// quadrature of psi_n^2 (tolerance 1e-8); the position matrix is filled by
/// quadrature.
inline Eigenbasis build_basis(int n_max, const UnitSystem& u,
                              const QuadratureSpec& quad = default_basis_quadrature()) {
  if (n_max < 1) throw DomainError("build_basis: n_max must be >= 1");
  quad.validate();

  Eigenbasis basis(u);
  basis.zeros_.reserve(static_cast<std::size_t>(n_max));
  for (int n = 1; n <= n_max; ++n) {
    const double x_n = specfun::airy_zero(n);
    basis.zeros_.push_back(x_n);
    basis.energies_.push_back(u.energy_scale() * x_n);
    basis.norms_.push_back(1.0 / std::fabs(specfun::airy_ai_prime(-x_n)));
  }

  for (int i = 0; i < n_max; ++i) {
    const auto points = detail::unit_breakpoints(0.0, basis.support_end(i, i));
    const double norm =
        specfun::integrate_1d([&](double y) { return basis.psi(i, y) * basis.psi(i, y); }, points, quad);
    if (std::fabs(norm - 1.0) > kNormalizationTolerance) {
      throw NumericalFailure("build_basis: level " + std::to_string(i + 1) + " has norm " +
                                 std::to_string(norm),
                             norm, std::fabs(norm - 1.0));
    }
  }

  basis.x_matrix_ = basis.moment_matrix(1, quad, "x_matrix");
  return basis;
}

/// Gaussian packet (2/(pi sigma^2))^{1/4} exp(-(x - x0)^2 / sigma^2).
/// Position variance is sigma^2 / 4.
struct PacketSpec {
  double x0 = 0.0;
  double sigma = 0.0;

  void validate() const {
    if (!(x0 > 0.0) || !std::isfinite(x0)) throw DomainError("PacketSpec: x0 must be > 0");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw DomainError("PacketSpec: sigma must be > 0");
  }

  /// Probability mass the full-line packet puts on x < 0.
  double clipped_mass() const { return 0.5 * std::erfc(std::numbers::sqrt2 * x0 / sigma); }
};

struct SpectralState {
  std::shared_ptr<const Eigenbasis> basis;
  std::vector<std::complex<double>> coefficients;
  double time = 0.0;

  double norm_squared() const {
    double total = 0.0;
    for (const auto& c : coefficients) total += std::norm(c);
    return total;
  }

  /// 1 - sum |c_n|^2: weight of the state outside the truncated basis.
  double truncation_loss() const { return 1.0 - norm_squared(); }
};

namespace detail {

inline void require_basis(const SpectralState& s) {
  if (!s.basis) throw DomainError("spectral state has no basis");
  if (static_cast<int>(s.coefficients.size()) != s.basis->n_max()) {
    throw DomainError("spectral state size does not match its basis");
  }
}

}  // namespace detail

/// Projects a scaled wavefunction f(y) supported on [a, b] onto the basis.
/// No truncation-loss check is applied.
template <class F>
SpectralState project_function(F&& f, double a, double b, std::shared_ptr<const Eigenbasis> basis,
                               const QuadratureSpec& quad = default_basis_quadrature()) {
  if (!basis) throw DomainError("project_function: null basis");
  if (!(a >= 0.0) || !(a < b)) throw DomainError("project_function: need 0 <= a < b");
  SpectralState state;
  state.coefficients.resize(static_cast<std::size_t>(basis->n_max()));
  const auto points = detail::unit_breakpoints(a, b);
  for (int i = 0; i < basis->n_max(); ++i) {
    const double c = specfun::integrate_1d([&](double y) { return basis->psi(i, y) * f(y); }, points, quad);
    state.coefficients[static_cast<std::size_t>(i)] = {c, 0.0};
  }
  state.basis = std::move(basis);
  return state;
}

/// Expansion coefficients of a Gaussian packet at t = 0. The part of the
/// packet below the mirror (< 1e-6 required) is clipped and the remainder
/// renormalized. Throws InsufficientBasis when more than 1e-3 of the norm
/// lies outside the basis.
inline SpectralState project_packet(const PacketSpec& p, std::shared_ptr<const Eigenbasis> basis,
                                    const QuadratureSpec& quad = default_basis_quadrature()) {
  p.validate();
  if (!basis) throw DomainError("project_packet: null basis");
  const double clipped = p.clipped_mass();
  if (!(clipped < kMaxClippedMass)) {
    throw DomainError("project_packet: packet extends below the mirror (x0 must be >~ 4 sigma)");
  }
  const double l = basis->units().length_scale();
  const double centre = p.x0 / l;
  const double width = p.sigma / l;
  const double amplitude =
      std::pow(2.0 / (std::numbers::pi * width * width), 0.25) / std::sqrt(1.0 - clipped);
  auto packet = [=](double y) {
    const double d = (y - centre) / width;
    return amplitude * std::exp(-d * d);
  };
  // exp(-d^2) < 1e-43 outside 10 widths.
  const double a = std::max(0.0, centre - 10.0 * width);
  const double b = centre + 10.0 * width;
  SpectralState state = project_function(packet, a, b, std::move(basis), quad);

  const double loss = state.truncation_loss();
  if (loss > kMaxTruncationLoss) {
    throw InsufficientBasis("project_packet: truncation loss " + std::to_string(loss) +
                                " exceeds 1e-3; increase n_max",
                            loss);
  }
  return state;
}

/// Advances the state by a duration t: c_n -> c_n exp(-i E_n t / hbar).
inline SpectralState evolve(const SpectralState& s, double t, const UnitSystem& u) {
  detail::require_basis(s);
  if (!(t >= 0.0)) throw DomainError("evolve: t must be >= 0");
  SpectralState out = s;
  const auto energies = s.basis->energies();
  for (std::size_t i = 0; i < out.coefficients.size(); ++i) {
    const double phase = energies[i] * t / u.hbar();
    out.coefficients[i] *= std::polar(1.0, -phase);
  }
  out.time = s.time + t;
  return out;
}

namespace detail {

inline std::complex<double> quadratic_form(std::span<const double> matrix,
                                           const std::vector<std::complex<double>>& c) {
  const std::size_t n = c.size();
  std::complex<double> total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::complex<double> row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += matrix[i * n + j] * c[j];
    total += std::conj(c[i]) * row;
  }
  return total;
}

}  // namespace detail

/// <x> = sum_{m,n} conj(c_m) c_n <m|x|n>, length units.
inline double expectation_x(const SpectralState& s) {
  detail::require_basis(s);
  return detail::quadratic_form(s.basis->x_matrix(), s.coefficients).real();
}

inline double expectation_x2(const SpectralState& s,
                             const QuadratureSpec& quad = default_basis_quadrature()) {
  detail::require_basis(s);
  return detail::quadratic_form(s.basis->x2_matrix(quad), s.coefficients).real();
}

/// Var(x) = <x^2> - <x>^2 (length^2). Small negative round-off is clamped to
/// zero; anything below -1e-10 <x^2> is a NumericalFailure.
inline double variance_x(const SpectralState& s,
                         const QuadratureSpec& quad = default_basis_quadrature()) {
  const double second = expectation_x2(s, quad);
  const double first = expectation_x(s);
  const double variance = second - first * first;
  if (variance < -1e-10 * std::fabs(second)) {
    throw NumericalFailure("variance_x: negative variance " + std::to_string(variance), variance);
  }
  return std::max(variance, 0.0);
}

/// Reconstructed wavefunction at position x (length units), in units of
/// l_g^{-1/2}.
inline std::complex<double> wavefunction(const SpectralState& s, double x) {
  detail::require_basis(s);
  const double y = x / s.basis->units().length_scale();
  std::complex<double> total = 0.0;
  for (int i = 0; i < s.basis->n_max(); ++i) total += s.coefficients[static_cast<std::size_t>(i)] * s.basis->psi(i, y);
  return total;
}

/// pi^2 x0 / (2 sigma^2) with x0, sigma in units of l_g: the n = 1 damping
/// exponent of the semiclassical <x(t)> series.
inline double series_damping_exponent(const PacketSpec& p, const UnitSystem& u) {
  p.validate();
  const double x0 = p.x0 / u.length_scale();
  const double sigma = p.sigma / u.length_scale();
  return std::numbers::pi * std::numbers::pi * x0 / (2.0 * sigma * sigma);
}

/// Bounce Fourier series with the n-th harmonic damped by exp(-n^2 exponent).
/// Uses the same harmonic convention as classical::bounce_fourier.
inline double damped_bounce_series(const classical::BounceSpec& spec, double t, int n_terms,
                                   double damping_exponent) {
  if (n_terms < 1) throw DomainError("damped_bounce_series: n_terms must be >= 1");
  if (!(damping_exponent >= 0.0)) throw DomainError("damped_bounce_series: exponent must be >= 0");
  const double T = classical::drop_time(spec);
  if (T == 0.0) return 0.0;
  const double w = std::numbers::pi * t / T;
  double sum = 0.0;
  for (int n = n_terms; n >= 1; --n) {
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    sum += sign / (double(n) * n) * std::exp(-damping_exponent * n * n) * std::cos(n * w);
  }
  return 2.0 / 3.0 * spec.x0 - 4.0 * spec.x0 / (std::numbers::pi * std::numbers::pi) * sum;
}

/// Semiclassical closed-form <x(t)> for a Gaussian packet released at rest
/// from height x0.
inline double expectation_x_series(const PacketSpec& p, double t, int n_terms, const UnitSystem& u) {
  const classical::BounceSpec spec{p.x0, 0.0, u.gravity()};
  return damped_bounce_series(spec, t, n_terms, series_damping_exponent(p, u));
}

}  // namespace bouncer::quantum
