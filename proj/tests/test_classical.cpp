#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "bouncer/classical.hpp"

using namespace bouncer;
using namespace bouncer::classical;

namespace {

// Heaviside-sum form of the bounce train:
//   (x0 - g t^2/2) Theta(t) + 2 g T sum_n (t - (2n-1)T) Theta(t - (2n-1)T).
double heaviside_bounce(const BounceSpec& s, double t) {
  const double T = std::sqrt(2.0 * s.x0 / s.g);
  double x = s.x0 - 0.5 * s.g * t * t;
  for (int n = 1; (2 * n - 1) * T < t; ++n) x += 2.0 * s.g * T * (t - (2 * n - 1) * T);
  return x;
}

// The series exactly as commonly printed:
//   (2/3) x0 + (4 x0/pi^2) sum (-1)^n/n^2 cos(2 pi n t / P).
double printed_series(double x0, double period, double t, int terms) {
  double sum = 0.0;
  for (int n = 1; n <= terms; ++n) {
    sum += ((n % 2) ? -1.0 : 1.0) / (double(n) * n) * std::cos(2.0 * std::numbers::pi * n * t / period);
  }
  return 2.0 / 3.0 * x0 + 4.0 * x0 / (std::numbers::pi * std::numbers::pi) * sum;
}

double max_fourier_deviation(const BounceSpec& s, int terms, int samples = 4000) {
  const double T = drop_time(s);
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double t = 2.0 * T * i / samples;
    worst = std::max(worst, std::fabs(bounce_fourier(s, t, terms) - bounce_trajectory(s, t)));
  }
  return worst;
}

}  // namespace

TEST(FreeFall, Examples) {
  const BounceSpec drop{1.0, 0.0, 2.0};
  EXPECT_DOUBLE_EQ(free_fall(drop, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(free_fall(drop, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(drop_time(drop), 1.0);
  const BounceSpec toss{0.0, 3.0, 2.0};
  EXPECT_DOUBLE_EQ(free_fall(toss, 3.0), 0.0);
}

TEST(FreeFall, ConservesEnergy) {
  const double m = 1.7;
  const BounceSpec s{3.0, 1.25, 9.81};
  auto energy = [&](double t) {
    const double v = free_fall_velocity(s, t);
    return 0.5 * m * v * v + m * s.g * free_fall(s, t);
  };
  const double e0 = energy(0.0);
  for (double t = 0.0; t < 5.0; t += 0.01) EXPECT_NEAR(energy(t) / e0, 1.0, 1e-12);
}

TEST(Bounce, Landmarks) {
  const BounceSpec s{2.0, 0.0, 9.81};
  const double T = drop_time(s);
  EXPECT_NEAR(bounce_trajectory(s, 2.0 * T), s.x0, 1e-14);
  EXPECT_NEAR(bounce_trajectory(s, T), 0.0, 1e-14);
  EXPECT_NEAR(bounce_trajectory(s, 3.0 * T), 0.0, 1e-14);
  EXPECT_NEAR(bounce_trajectory(s, 0.5 * T), 0.75 * s.x0, 1e-14);
  EXPECT_NEAR(heaviside_bounce(s, 0.5 * T), 0.75 * s.x0, 1e-14);
}

TEST(Bounce, MatchesHeavisideSum) {
  const BounceSpec s{1.3, 0.0, 2.5};
  const double T = drop_time(s);
  for (double t = 0.0; t < 12.0 * T; t += T / 37.0) {
    EXPECT_NEAR(bounce_trajectory(s, t), heaviside_bounce(s, t), 1e-12) << t / T;
  }
}

TEST(Bounce, BoundedAndPeriodic) {
  const BounceSpec s{0.7, 0.0, 9.81};
  const double T = drop_time(s);
  for (double t = 0.0; t < 50.0 * T; t += T / 13.0) {
    const double x = bounce_trajectory(s, t);
    EXPECT_GE(x, 0.0);
    EXPECT_LE(x, s.x0);
    EXPECT_NEAR(bounce_trajectory(s, t + 2.0 * T), x, 1e-12 * s.x0 * (1.0 + t / T));
  }
}

TEST(Bounce, RejectsNonZeroInitialVelocity) {
  EXPECT_THROW(bounce_trajectory({1.0, 0.5, 1.0}, 0.1), UnsupportedConfiguration);
  EXPECT_THROW(bounce_fourier({1.0, 0.5, 1.0}, 0.1, 10), UnsupportedConfiguration);
  EXPECT_THROW(bounce_trajectory({1.0, 0.0, 1.0}, -0.1), DomainError);
  EXPECT_THROW(bounce_trajectory({1.0, 0.0, 0.0}, 0.1), DomainError);
}

TEST(Fourier, ApexValue) {
  const BounceSpec s{1.0, 0.0, 9.81};
  EXPECT_NEAR(bounce_fourier(s, 0.0, 200), 1.0, 2e-3);
  EXPECT_NEAR(bounce_fourier(s, 0.0, 200), bounce_trajectory(s, 0.0), 2e-3);
}

TEST(Fourier, ZeroAmplitude) {
  const BounceSpec s{0.0, 0.0, 9.81};
  for (double t : {0.0, 0.3, 10.0}) EXPECT_EQ(bounce_fourier(s, t, 50), 0.0);
  EXPECT_THROW(bounce_fourier({1.0, 0.0, 1.0}, 0.0, 0), DomainError);
}

TEST(Fourier, TimeAverageIsTwoThirdsOfHeight) {
  const BounceSpec s{1.6, 0.0, 9.81};
  const double T = drop_time(s);
  // The trapezoid rule on a uniform grid is exact for trigonometric
  // polynomials of degree below the sample count.
  const int samples = 1024;
  double sum = 0.0;
  for (int i = 0; i < samples; ++i) sum += bounce_fourier(s, 2.0 * T * i / samples, 200);
  EXPECT_NEAR(sum / samples / (2.0 / 3.0 * s.x0), 1.0, 1e-6);
}

TEST(Fourier, ConvergesAsInverseTermCount) {
  const BounceSpec s{1.0, 0.0, 9.81};
  double previous = 1.0;
  for (int terms : {5, 10, 20, 50, 100, 200, 400}) {
    const double dev = max_fourier_deviation(s, terms);
    EXPECT_LT(dev, previous) << terms;
    // Tail bound 4/pi^2 sum_{n>N} 1/n^2 < 4/(pi^2 N).
    EXPECT_LE(dev * terms, 4.0 / (std::numbers::pi * std::numbers::pi) * s.x0) << terms;
    previous = dev;
  }
}

// The printed sign convention evaluates to x0/3 at the apex whichever period
// is used inside the cosine, so it cannot describe a drop from rest at x0.
// The pinned convention (period 2T, opposite sign) reproduces the fold.
TEST(Fourier, PrintedConventionDoesNotMatchFold) {
  const BounceSpec s{1.0, 0.0, 9.81};
  const double T = drop_time(s);
  for (double period : {T, 2.0 * T}) {
    EXPECT_NEAR(printed_series(s.x0, period, 0.0, 400), s.x0 / 3.0, 2e-3);
    double worst = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = 2.0 * T * i / 400;
      worst = std::max(worst, std::fabs(printed_series(s.x0, period, t, 200) - bounce_trajectory(s, t)));
    }
    EXPECT_GT(worst, 0.5 * s.x0);
  }
  // With period 2T the printed series is the mirror image 4/3 x0 - x(t).
  for (double t = 0.0; t < 2.0 * T; t += T / 17.0) {
    EXPECT_NEAR(printed_series(s.x0, 2.0 * T, t, 200), 4.0 / 3.0 * s.x0 - bounce_fourier(s, t, 200), 1e-12);
  }
  EXPECT_LT(max_fourier_deviation(s, 200), 2.1e-3);
}
