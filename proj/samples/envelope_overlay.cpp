// Prints the classical bounce of a neutron dropped from 10 l_g together with
// the dispersion bands for alpha = 1 and alpha = 0.4277, in micrometres and
// milliseconds. Pipe into any plotting tool.

#include <iomanip>
#include <iostream>

#include "bouncer/classical.hpp"
#include "bouncer/moments.hpp"

int main() {
  using namespace bouncer;
  const UnitSystem u = neutron_units();
  const double x0 = 10.0 * u.length_scale();
  const double T = classical::drop_time({x0, 0.0, u.gravity()});
  const auto wide = moments::saturated_ic(1.0, u);
  const auto narrow = moments::saturated_ic(0.4277, u);

  std::cout << "t_ms,x_um,lower_a1,upper_a1,lower_a2,upper_a2\n" << std::setprecision(8);
  for (int k = 0; k <= 400; ++k) {
    const double t = 6.0 * T * k / 400;
    const auto a = moments::envelope(x0, wide, u.mass(), u.gravity(), t);
    const auto b = moments::envelope(x0, narrow, u.mass(), u.gravity(), t);
    std::cout << t * 1e3 << ',' << classical::bounce_trajectory({x0, 0.0, u.gravity()}, t) * 1e6 << ','
              << a.lower * 1e6 << ',' << a.upper * 1e6 << ',' << b.lower * 1e6 << ',' << b.upper * 1e6 << '\n';
  }
}
