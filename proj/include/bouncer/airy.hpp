#pragma once

// Airy function Ai, its derivative and the zeros of Ai on the negative axis.
//
// Ai is evaluated from its Maclaurin series in extended precision for
// |x| <= kAirySeriesLimit and from the Poincare asymptotic expansions beyond
// (exponentially decaying form for x > 0, modulated sine/cosine form for x < 0).
// At the switch point both branches agree to about 1e-13 absolute.

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "bouncer/errors.hpp"

namespace bouncer::specfun {

/// Ai and Ai' evaluated at the same argument.
struct AiryValue {
  double ai;
  double ai_prime;
};

inline constexpr double kAirySeriesLimit = 8.0;
inline constexpr int kAiryZeroMaxIterations = 50;
inline constexpr double kAiryZeroStepTolerance = 1e-13;

namespace detail {

// Ai(0) and -Ai'(0).
inline constexpr long double kAiAtZero = 0.355028053887817239260063186004183176L;
inline constexpr long double kMinusAiPrimeAtZero = 0.258819403792806798405183560189203963L;

inline void require_finite(double x, const char* who) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(who) + ": argument must be finite");
  }
}

// Ai = c1 f - c2 g and Ai' = c1 f' - c2 g', with
//   f(x) = sum_k 3^k (1/3)_k x^{3k} / (3k)!,
//   g(x) = sum_k 3^k (2/3)_k x^{3k+1} / (3k+1)!.
// Terms are generated by their ratios; the x^3 factor is shared.
inline AiryValue airy_maclaurin(double xd) {
  const long double x = xd;
  const long double x3 = x * x * x;

  long double f_term = 1.0L;   // k = 0 term of f
  long double g_term = x;      // k = 0 term of g
  long double fp_term = 0.0L;  // f' starts at k = 1
  long double gp_term = 1.0L;  // k = 0 term of g'

  long double f = f_term, g = g_term, fp = 0.0L, gp = gp_term;
  long double largest = std::fabs(f_term) + std::fabs(g_term) + std::fabs(gp_term);

  for (int k = 1; k < 400; ++k) {
    const long double k3 = 3.0L * k;
    f_term *= x3 / ((k3 - 1.0L) * k3);
    g_term *= x3 / (k3 * (k3 + 1.0L));
    fp_term = (k == 1) ? x * x / 2.0L : fp_term * x3 / ((k3 - 1.0L) * (k3 - 3.0L));
    gp_term *= x3 / (k3 * (k3 - 2.0L));

    f += f_term;
    g += g_term;
    fp += fp_term;
    gp += gp_term;

    const long double size =
        std::fabs(f_term) + std::fabs(g_term) + std::fabs(fp_term) + std::fabs(gp_term);
    if (size > largest) largest = size;
    if (size <= largest * 1e-24L) break;
  }

  return {static_cast<double>(kAiAtZero * f - kMinusAiPrimeAtZero * g),
          static_cast<double>(kAiAtZero * fp - kMinusAiPrimeAtZero * gp)};
}

// Partial sums of the u_k / v_k expansions in powers of 1/zeta. `alternate`
// applies (-1)^k; the even/odd split for the oscillatory branch is handled
// by the caller through `parity`.
struct AsymptoticSums {
  double u_even, u_odd, v_even, v_odd;  // sum (-1)^j u_{2j} / zeta^{2j}, ...
  double u_all, v_all;                  // sum (-1)^k u_k / zeta^k, ...
};

inline AsymptoticSums airy_asymptotic_sums(double zeta) {
  AsymptoticSums s{1.0, 0.0, 1.0, 0.0, 1.0, 1.0};
  double u = 1.0;
  double inv_pow = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
    const double v = -(6.0 * k + 1.0) / (6.0 * k - 1.0) * u;
    inv_pow /= zeta;
    const double tu = u * inv_pow;
    const double tv = v * inv_pow;
    const double magnitude = std::fabs(tu) + std::fabs(tv);
    // Stop at the smallest term of the divergent series.
    if (magnitude > previous) break;
    previous = magnitude;

    const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
    s.u_all += sign_k * tu;
    s.v_all += sign_k * tv;
    const int j = k / 2;
    const double sign_j = (j % 2 == 0) ? 1.0 : -1.0;
    if (k % 2 == 0) {
      s.u_even += sign_j * tu;
      s.v_even += sign_j * tv;
    } else {
      s.u_odd += sign_j * tu;
      s.v_odd += sign_j * tv;
    }
    if (magnitude < 1e-18) break;
  }
  return s;
}

inline AiryValue airy_asymptotic(double x) {
  const double inv_sqrt_pi = 1.0 / std::sqrt(std::numbers::pi);
  if (x > 0.0) {
    const double zeta = 2.0 / 3.0 * x * std::sqrt(x);
    const AsymptoticSums s = airy_asymptotic_sums(zeta);
    const double quarter = std::sqrt(std::sqrt(x));
    const double decay = std::exp(-zeta);
    return {0.5 * inv_sqrt_pi * decay / quarter * s.u_all,
            -0.5 * inv_sqrt_pi * decay * quarter * s.v_all};
  }
  const double z = -x;
  const double zeta = 2.0 / 3.0 * z * std::sqrt(z);
  const AsymptoticSums s = airy_asymptotic_sums(zeta);
  const double quarter = std::sqrt(std::sqrt(z));
  const double phase = zeta - std::numbers::pi / 4.0;
  const double c = std::cos(phase);
  const double sn = std::sin(phase);
  return {inv_sqrt_pi / quarter * (c * s.u_even + sn * s.u_odd),
          inv_sqrt_pi * quarter * (sn * s.v_even - c * s.v_odd)};
}

}  // namespace detail

/// Ai(x) and Ai'(x) together. Absolute error below 1e-12 on |x| <= 15.
inline AiryValue airy(double x) {
  detail::require_finite(x, "airy");
  if (std::fabs(x) <= kAirySeriesLimit) return detail::airy_maclaurin(x);
  return detail::airy_asymptotic(x);
}

inline double airy_ai(double x) {
  detail::require_finite(x, "airy_ai");
  return airy(x).ai;
}

inline double airy_ai_prime(double x) {
  detail::require_finite(x, "airy_ai_prime");
  return airy(x).ai_prime;
}

/// Leading-order estimate [3pi/2 (n - 1/4)]^{2/3} of the n-th zero magnitude.
inline double airy_zero_asymptotic(int n) {
  if (n < 1) throw DomainError("airy_zero_asymptotic: n must be >= 1");
  return std::pow(1.5 * std::numbers::pi * (n - 0.25), 2.0 / 3.0);
}

/// x_n > 0 with Ai(-x_n) = 0, refined by Newton from the asymptotic seed.
inline double airy_zero(int n) {
  if (n < 1) throw DomainError("airy_zero: n must be >= 1");
  double x = airy_zero_asymptotic(n);
  for (int it = 0; it < kAiryZeroMaxIterations; ++it) {
    const AiryValue v = airy(-x);
    // d/dx Ai(-x) = -Ai'(-x)
    const double step = v.ai / v.ai_prime;
    x += step;
    if (std::fabs(step) < kAiryZeroStepTolerance) return x;
  }
  throw NumericalFailure("airy_zero: Newton iteration did not converge for n = " +
                             std::to_string(n),
                         x, 0.0);
}

}  // namespace bouncer::specfun
