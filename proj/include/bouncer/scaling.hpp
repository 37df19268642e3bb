#pragma once

// Physical constants and the gravitational scales of the bouncer:
//   l_g = (hbar^2 / (2 g m^2))^{1/3},  E_g = m g l_g,  t_g = hbar / E_g.
// In units of (l_g, E_g, t_g) the stationary problem is -psi'' + x psi = E psi.

#include <cmath>
#include <string>
#include <string_view>

#include "bouncer/errors.hpp"

namespace bouncer {

namespace si {
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kElectronVolt = 1.602176634e-19;  // J
inline constexpr double kSpeedOfLight = 299792458.0;      // m / s
inline constexpr double kStandardGravity = 9.81;          // m / s^2

// 940 MeV/c^2 in kilograms.
inline constexpr double kNeutronMass =
    940.0e6 * kElectronVolt / (kSpeedOfLight * kSpeedOfLight);
}  // namespace si

class UnitSystem {
 public:
  double mass() const noexcept { return mass_; }
  double gravity() const noexcept { return gravity_; }
  double hbar() const noexcept { return hbar_; }

  double length_scale() const noexcept { return length_; }
  double energy_scale() const noexcept { return energy_; }
  double time_scale() const noexcept { return time_; }

  friend UnitSystem make_units(double m, double g, double hbar);

 private:
  UnitSystem() = default;

  double mass_ = 0.0;
  double gravity_ = 0.0;
  double hbar_ = 0.0;
  double length_ = 0.0;
  double energy_ = 0.0;
  double time_ = 0.0;
};

inline UnitSystem make_units(double m, double g, double hbar) {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(m)) throw DomainError("make_units: mass must be positive and finite");
  if (!positive(g)) throw DomainError("make_units: gravity must be positive and finite");
  if (!positive(hbar)) throw DomainError("make_units: hbar must be positive and finite");

  UnitSystem u;
  u.mass_ = m;
  u.gravity_ = g;
  u.hbar_ = hbar;
  u.length_ = std::cbrt(hbar * hbar / (2.0 * g * m * m));
  u.energy_ = m * g * u.length_;
  u.time_ = hbar / u.energy_;
  return u;
}

/// Neutron (m = 940 MeV/c^2) at standard gravity, SI units.
inline UnitSystem neutron_units() {
  return make_units(si::kNeutronMass, si::kStandardGravity, si::kHbar);
}

/// m = 1/sqrt(2), g = 1, hbar = 1, so that l_g = 1.
inline UnitSystem natural_units() { return make_units(1.0 / std::sqrt(2.0), 1.0, 1.0); }

inline UnitSystem units_from_preset(std::string_view name) {
  if (name == "neutron") return neutron_units();
  if (name == "natural") return natural_units();
  throw DomainError("unknown unit preset '" + std::string(name) + "'");
}

/// A (length, energy, time) triple in the units of some UnitSystem or in
/// gravitational units.
struct ScaledPoint {
  double x = 0.0;
  double energy = 0.0;
  double t = 0.0;
};

inline ScaledPoint to_dimensionless(double x, double energy, double t, const UnitSystem& u) {
  return {x / u.length_scale(), energy / u.energy_scale(), t / u.time_scale()};
}

inline ScaledPoint from_dimensionless(const ScaledPoint& p, const UnitSystem& u) {
  return {p.x * u.length_scale(), p.energy * u.energy_scale(), p.t * u.time_scale()};
}

}  // namespace bouncer
