#pragma once

// Scenario runner behind the command-line tool: configuration, validation,
// and the table producers for each subcommand.

#include <cmath>
#include <iomanip>
#include <limits>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bouncer/classical.hpp"
#include "bouncer/errors.hpp"
#include "bouncer/moments.hpp"
#include "bouncer/quantum.hpp"
#include "bouncer/scaling.hpp"
#include "bouncer/specfun.hpp"

namespace bouncer::scenario {

/// Invalid or incomplete scenario configuration (usage error).
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ScenarioKind { Spectrum, Classical, Quantum, Moments, Compare };

inline ScenarioKind parse_kind(const std::string& name) {
  if (name == "spectrum") return ScenarioKind::Spectrum;
  if (name == "classical") return ScenarioKind::Classical;
  if (name == "quantum") return ScenarioKind::Quantum;
  if (name == "moments") return ScenarioKind::Moments;
  if (name == "compare") return ScenarioKind::Compare;
  throw ConfigError("unknown scenario '" + name + "'");
}

/// Lengths and times are in the units of the selected unit system
/// (SI for the neutron preset).
struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::Spectrum;

  std::optional<std::string> preset;
  std::optional<double> mass;
  std::optional<double> gravity;
  std::optional<double> hbar;

  std::optional<double> x0;
  std::optional<double> sigma;
  std::optional<double> alpha;
  std::optional<int> n_max;
  std::optional<int> n_terms;
  std::optional<double> t_end;
  std::optional<double> dt;

  /// Disables the spectral solver in `compare` (its columns stay empty).
  bool quantum = true;
  /// Restart the dispersion clock at each apex for the compare envelope.
  bool envelope_reset = false;
};

inline constexpr int kDefaultFourierTerms = 200;
/// Default step as a fraction of the drop time.
inline constexpr double kDefaultStepsPerDropTime = 1000.0;

namespace detail {

template <class T>
const T& require(const std::optional<T>& field, const char* name) {
  if (!field) throw ConfigError(std::string("missing required field '") + name + "'");
  return *field;
}

inline void require_positive(const std::optional<double>& field, const char* name) {
  if (field && !(std::isfinite(*field) && *field > 0.0)) {
    throw ConfigError(std::string("field '") + name + "' must be positive");
  }
}

}  // namespace detail

inline UnitSystem resolve_units(const ScenarioConfig& cfg) {
  const bool explicit_units = cfg.mass || cfg.gravity || cfg.hbar;
  if (explicit_units) {
    if (cfg.preset) throw ConfigError("field 'preset' conflicts with explicit mass/gravity/hbar");
    const double m = detail::require(cfg.mass, "mass");
    const double g = detail::require(cfg.gravity, "gravity");
    const double h = detail::require(cfg.hbar, "hbar");
    try {
      return make_units(m, g, h);
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    return units_from_preset(cfg.preset.value_or("natural"));
  } catch (const DomainError& e) {
    throw ConfigError(std::string("field 'preset': ") + e.what());
  }
}

/// Checks that every field the scenario needs is present and in range.
inline void validate(const ScenarioConfig& cfg) {
  detail::require_positive(cfg.x0, "x0");
  detail::require_positive(cfg.sigma, "sigma");
  detail::require_positive(cfg.alpha, "alpha");
  detail::require_positive(cfg.dt, "dt");
  if (cfg.t_end && !(std::isfinite(*cfg.t_end) && *cfg.t_end >= 0.0)) {
    throw ConfigError("field 'tend' must be >= 0");
  }
  if (cfg.n_max && *cfg.n_max < 1) throw ConfigError("field 'nmax' must be >= 1");
  if (cfg.n_terms && *cfg.n_terms < 1) throw ConfigError("field 'nterms' must be >= 1");
  resolve_units(cfg);

  switch (cfg.kind) {
    case ScenarioKind::Spectrum:
      detail::require(cfg.n_max, "nmax");
      break;
    case ScenarioKind::Classical:
      detail::require(cfg.x0, "x0");
      detail::require(cfg.t_end, "tend");
      break;
    case ScenarioKind::Quantum:
      detail::require(cfg.x0, "x0");
      detail::require(cfg.sigma, "sigma");
      detail::require(cfg.n_max, "nmax");
      detail::require(cfg.t_end, "tend");
      break;
    case ScenarioKind::Moments:
      detail::require(cfg.x0, "x0");
      detail::require(cfg.alpha, "alpha");
      detail::require(cfg.t_end, "tend");
      break;
    case ScenarioKind::Compare:
      detail::require(cfg.x0, "x0");
      detail::require(cfg.sigma, "sigma");
      detail::require(cfg.alpha, "alpha");
      detail::require(cfg.t_end, "tend");
      if (cfg.quantum) detail::require(cfg.n_max, "nmax");
      break;
  }
}

/// Column-oriented numeric table; empty cells are written as nothing.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  std::size_t column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw std::out_of_range("no column '" + name + "'");
  }
};

/// CSV with a one-line header and 17 significant digits per value.
inline void write_csv(std::ostream& os, const Table& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i) {
    if (i) os << ',';
    os << table.header[i];
  }
  os << '\n';
  std::ostringstream cell;
  cell.imbue(std::locale::classic());
  cell << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i]) {
        cell.str("");
        cell << *row[i];
        os << cell.str();
      }
    }
    os << '\n';
  }
}

struct RunResult {
  Table table;
  /// One message per sub-scenario that failed; its columns are left empty.
  std::vector<std::string> failures;
  /// Non-fatal diagnostics (e.g. integrity warnings from the moment flow).
  std::vector<std::string> warnings;
};

/// Uniform grid 0, dt, 2 dt, ... up to t_end (inclusive within 1e-9 dt).
inline std::vector<double> time_grid(double t_end, double dt) {
  const auto last = static_cast<long long>(std::floor(t_end / dt + 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(last) + 1);
  for (long long k = 0; k <= last; ++k) grid.push_back(static_cast<double>(k) * dt);
  return grid;
}

namespace detail {

inline double step_or_default(const ScenarioConfig& cfg, const UnitSystem& u) {
  if (cfg.dt) return *cfg.dt;
  const double T = classical::drop_time({*cfg.x0, 0.0, u.gravity()});
  if (!(T > 0.0)) throw ConfigError("field 'dt' is required when x0 gives a zero drop time");
  return T / kDefaultStepsPerDropTime;
}

inline Table make_table(std::vector<std::string> header, std::size_t rows) {
  Table t;
  t.rows.assign(rows, std::vector<std::optional<double>>(header.size()));
  t.header = std::move(header);
  return t;
}

// <x>(t) for each grid time by spectral evolution from t = 0.
inline std::vector<double> quantum_expectation(const ScenarioConfig& cfg, const UnitSystem& u,
                                               const std::vector<double>& grid,
                                               std::vector<double>* variance = nullptr) {
  auto basis = std::make_shared<const quantum::Eigenbasis>(quantum::build_basis(*cfg.n_max, u));
  const quantum::SpectralState initial = quantum::project_packet({*cfg.x0, *cfg.sigma}, basis);
  std::vector<double> out;
  out.reserve(grid.size());
  for (double t : grid) {
    const quantum::SpectralState s = quantum::evolve(initial, t, u);
    out.push_back(quantum::expectation_x(s));
    if (variance) variance->push_back(quantum::variance_x(s));
  }
  return out;
}

}  // namespace detail

/// n, x_n, x_n_asymptotic, E_n, rel_err. rel_err is the relative gap of the
/// asymptotic estimate in percent.
inline RunResult run_spectrum(const ScenarioConfig& cfg) {
  validate(cfg);
  const UnitSystem u = resolve_units(cfg);
  const int n_max = *cfg.n_max;
  RunResult result{detail::make_table({"n", "x_n", "x_n_asymptotic", "E_n", "rel_err"},
                                      static_cast<std::size_t>(n_max)),
                   {},
                   {}};
  for (int n = 1; n <= n_max; ++n) {
    const double exact = specfun::airy_zero(n);
    const double seed = specfun::airy_zero_asymptotic(n);
    result.table.rows[static_cast<std::size_t>(n - 1)] = {
        double(n), exact, seed, exact * u.energy_scale(), 100.0 * (exact - seed) / exact};
  }
  return result;
}

/// t, x_classical, x_fourier.
inline RunResult run_classical(const ScenarioConfig& cfg) {
  validate(cfg);
  const UnitSystem u = resolve_units(cfg);
  const classical::BounceSpec spec{*cfg.x0, 0.0, u.gravity()};
  const int terms = cfg.n_terms.value_or(kDefaultFourierTerms);
  const auto grid = time_grid(*cfg.t_end, detail::step_or_default(cfg, u));
  RunResult result{detail::make_table({"t", "x_classical", "x_fourier"}, grid.size()), {}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.table.rows[i] = {grid[i], classical::bounce_trajectory(spec, grid[i]),
                            classical::bounce_fourier(spec, grid[i], terms)};
  }
  return result;
}

/// t, x_quantum, var_x, x_series.
inline RunResult run_quantum(const ScenarioConfig& cfg) {
  validate(cfg);
  const UnitSystem u = resolve_units(cfg);
  const quantum::PacketSpec packet{*cfg.x0, *cfg.sigma};
  const int terms = cfg.n_terms.value_or(kDefaultFourierTerms);
  const auto grid = time_grid(*cfg.t_end, detail::step_or_default(cfg, u));
  std::vector<double> variance;
  const auto expectation = detail::quantum_expectation(cfg, u, grid, &variance);
  RunResult result{detail::make_table({"t", "x_quantum", "var_x", "x_series"}, grid.size()), {}, {}};
  for (std::size_t i = 0; i < grid.size(); ++i) {
    result.table.rows[i] = {grid[i], expectation[i], variance[i],
                            quantum::expectation_x_series(packet, grid[i], terms, u)};
  }
  return result;
}

/// t, x, p, G20, G11, G02, env_lower, env_upper, env_lower_reset,
/// env_upper_reset, uncertainty_product. (x, p) follow the unbounded linear
/// potential; the envelopes surround the folded bounce.
inline RunResult run_moments(const ScenarioConfig& cfg) {
  validate(cfg);
  const UnitSystem u = resolve_units(cfg);
  const double m = u.mass();
  const double g = u.gravity();
  const auto ic = moments::saturated_ic(*cfg.alpha, u);
  const auto grid = time_grid(*cfg.t_end, detail::step_or_default(cfg, u));
  const double dt = detail::step_or_default(cfg, u);
  const auto trajectory = moments::integrate(moments::make_state(*cfg.x0, 0.0, ic.moments),
                                             moments::PolynomialPotential::linear(m, g), m,
                                             grid.back(), dt, u.hbar());

  RunResult result{detail::make_table({"t", "x", "p", "G20", "G11", "G02", "env_lower", "env_upper",
                                       "env_lower_reset", "env_upper_reset", "uncertainty_product"},
                                      grid.size()),
                   {},
                   {}};
  if (trajectory.integrity_warning) result.warnings.push_back(*trajectory.integrity_warning);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& s = trajectory.points[i].state;
    const auto env = moments::envelope(*cfg.x0, ic, m, g, grid[i]);
    const auto reset =
        moments::envelope(*cfg.x0, ic, m, g, grid[i], moments::EnvelopeMode::ResetEachPeriod);
    result.table.rows[i] = {grid[i],   s.x,         s.p,         s.G(2, 0),
                            s.G(1, 1), s.G(0, 2),   env.lower,   env.upper,
                            reset.lower, reset.upper, moments::uncertainty_product(s)};
  }
  return result;
}

/// t, x_classical, x_quantum, x_series, env_lower, env_upper, G02, G11, G20
/// on one uniform grid. A failing sub-scenario leaves its columns empty and
/// is reported in RunResult::failures.
inline RunResult run_compare(const ScenarioConfig& cfg) {
  validate(cfg);
  const UnitSystem u = resolve_units(cfg);
  const double m = u.mass();
  const double g = u.gravity();
  const double dt = detail::step_or_default(cfg, u);
  const auto grid = time_grid(*cfg.t_end, dt);
  const int terms = cfg.n_terms.value_or(kDefaultFourierTerms);
  const classical::BounceSpec bounce{*cfg.x0, 0.0, g};
  const quantum::PacketSpec packet{*cfg.x0, *cfg.sigma};
  const auto mode = cfg.envelope_reset ? moments::EnvelopeMode::ResetEachPeriod
                                       : moments::EnvelopeMode::Continuous;

  RunResult result{detail::make_table({"t", "x_classical", "x_quantum", "x_series", "env_lower",
                                       "env_upper", "G02", "G11", "G20"},
                                      grid.size()),
                   {},
                   {}};
  auto& rows = result.table.rows;

  for (std::size_t i = 0; i < grid.size(); ++i) {
    rows[i][0] = grid[i];
    rows[i][1] = classical::bounce_trajectory(bounce, grid[i]);
    rows[i][3] = quantum::expectation_x_series(packet, grid[i], terms, u);
  }

  if (cfg.quantum) {
    try {
      const auto expectation = detail::quantum_expectation(cfg, u, grid);
      for (std::size_t i = 0; i < grid.size(); ++i) rows[i][2] = expectation[i];
    } catch (const std::exception& e) {
      result.failures.push_back(std::string("quantum: ") + e.what());
    }
  }

  try {
    const auto ic = moments::saturated_ic(*cfg.alpha, u);
    const auto trajectory = moments::integrate(moments::make_state(*cfg.x0, 0.0, ic.moments),
                                               moments::PolynomialPotential::linear(m, g), m,
                                               grid.back(), dt, u.hbar());
    if (trajectory.integrity_warning) result.warnings.push_back("moments: " + *trajectory.integrity_warning);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const auto& s = trajectory.points[i].state;
      const auto env = moments::envelope(*cfg.x0, ic, m, g, grid[i], mode);
      rows[i][4] = env.lower;
      rows[i][5] = env.upper;
      rows[i][6] = s.G(0, 2);
      rows[i][7] = s.G(1, 1);
      rows[i][8] = s.G(2, 0);
    }
  } catch (const std::exception& e) {
    result.failures.push_back(std::string("moments: ") + e.what());
  }
  return result;
}

inline RunResult run(const ScenarioConfig& cfg) {
  switch (cfg.kind) {
    case ScenarioKind::Spectrum: return run_spectrum(cfg);
    case ScenarioKind::Classical: return run_classical(cfg);
    case ScenarioKind::Quantum: return run_quantum(cfg);
    case ScenarioKind::Moments: return run_moments(cfg);
    case ScenarioKind::Compare: return run_compare(cfg);
  }
  throw ConfigError("unknown scenario");
}

}  // namespace bouncer::scenario
