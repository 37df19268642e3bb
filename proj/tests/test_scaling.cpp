#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bouncer/scaling.hpp"

using namespace bouncer;

namespace {
constexpr double kMicrometre = 1e-6;
constexpr double kPicoElectronVolt = 1e-12 * si::kElectronVolt;
}  // namespace

TEST(Scaling, NeutronGravitationalLength) {
  const UnitSystem u = neutron_units();
  EXPECT_NEAR(u.length_scale() / kMicrometre, 5.87, 0.005 * 5.87);
}

TEST(Scaling, NeutronGravitationalEnergy) {
  const UnitSystem u = neutron_units();
  EXPECT_NEAR(u.energy_scale() / kPicoElectronVolt, 0.602, 0.005 * 0.602);
}

TEST(Scaling, NaturalUnitsHaveUnitLength) {
  const UnitSystem u = make_units(1.0 / std::sqrt(2.0), 1.0, 1.0);
  EXPECT_NEAR(u.length_scale(), 1.0, 1e-15);
  EXPECT_NEAR(natural_units().length_scale(), 1.0, 1e-15);
}

TEST(Scaling, DerivedScalesAreConsistent) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  for (int i = 0; i < 200; ++i) {
    const double m = std::pow(10.0, exponent(rng));
    const double g = std::pow(10.0, exponent(rng));
    const double h = std::pow(10.0, exponent(rng));
    const UnitSystem u = make_units(m, g, h);
    const double closed = std::cbrt(h * h * g * g * m / 2.0);
    EXPECT_NEAR(u.energy_scale() / closed, 1.0, 1e-12);
    EXPECT_NEAR(u.energy_scale() / (m * g) / u.length_scale(), 1.0, 1e-12);
    EXPECT_GT(u.time_scale(), 0.0);
    EXPECT_NEAR(u.time_scale() * u.energy_scale() / h, 1.0, 1e-15);
  }
  const UnitSystem n = neutron_units();
  EXPECT_NEAR(n.energy_scale() / std::cbrt(n.hbar() * n.hbar() * n.gravity() * n.gravity() * n.mass() / 2.0),
              1.0, 1e-12);
}

TEST(Scaling, RejectsNonPositiveInputs) {
  EXPECT_THROW(make_units(0.0, 1.0, 1.0), DomainError);
  EXPECT_THROW(make_units(1.0, -1.0, 1.0), DomainError);
  EXPECT_THROW(make_units(1.0, 1.0, std::nan("")), DomainError);
  EXPECT_THROW(make_units(1.0, 1.0, INFINITY), DomainError);
}

TEST(Scaling, Presets) {
  EXPECT_EQ(units_from_preset("neutron").mass(), si::kNeutronMass);
  EXPECT_EQ(units_from_preset("natural").length_scale(), natural_units().length_scale());
  EXPECT_THROW(units_from_preset("proton"), DomainError);
}

TEST(Scaling, ScalesMapToUnity) {
  const UnitSystem u = neutron_units();
  const ScaledPoint p = to_dimensionless(u.length_scale(), u.energy_scale(), u.time_scale(), u);
  EXPECT_DOUBLE_EQ(p.x, 1.0);
  EXPECT_DOUBLE_EQ(p.energy, 1.0);
  EXPECT_DOUBLE_EQ(p.t, 1.0);
  const ScaledPoint zero = to_dimensionless(0.0, 0.0, 0.0, u);
  EXPECT_EQ(zero.x, 0.0);
  EXPECT_EQ(zero.energy, 0.0);
  EXPECT_EQ(zero.t, 0.0);
}

TEST(Scaling, NeutronHeightInGravitationalLengths) {
  // 11.74 um is twice the 5.87 um gravitational length.
  const ScaledPoint p = to_dimensionless(11.74 * kMicrometre, 0.0, 0.0, neutron_units());
  EXPECT_NEAR(p.x, 2.0, 0.01);
}

TEST(Scaling, RoundTrip) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> exponent(-20.0, 20.0);
  const UnitSystem units[] = {neutron_units(), natural_units(), make_units(3.0, 0.2, 7.0)};
  for (const UnitSystem& u : units) {
    for (int i = 0; i < 500; ++i) {
      const double x = std::pow(10.0, exponent(rng));
      const double e = std::pow(10.0, exponent(rng));
      const double t = std::pow(10.0, exponent(rng));
      const ScaledPoint back = from_dimensionless(to_dimensionless(x, e, t, u), u);
      EXPECT_NEAR(back.x / x, 1.0, 1e-14);
      EXPECT_NEAR(back.energy / e, 1.0, 1e-14);
      EXPECT_NEAR(back.t / t, 1.0, 1e-14);
    }
  }
}
