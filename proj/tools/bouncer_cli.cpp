// bouncer: classical, quantum and moment-hierarchy simulations of a particle
// bouncing on a mirror in uniform gravity.
//
// Exit codes: 0 success, 2 usage/config error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "bouncer/errors.hpp"
#include "bouncer/scenario.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

template <class T>
void copy_if_set(const CLI::Option* opt, const T& value, std::optional<T>& field) {
  if (opt->count() > 0) field = value;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bouncer::scenario;

  CLI::App app{"Quantum bouncer: classical, spectral and moment-hierarchy dynamics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key=value configuration file (flags override it)");

  std::string preset;
  double mass = 0, gravity = 0, hbar = 0, x0 = 0, sigma = 0, alpha = 0, t_end = 0, dt = 0;
  int n_max = 0, n_terms = 0;
  std::string out_path;
  bool no_quantum = false;
  bool envelope_reset = false;

  auto* o_preset = app.add_option("--preset", preset, "Unit preset: neutron | natural (default natural)");
  auto* o_mass = app.add_option("--mass", mass, "Particle mass");
  auto* o_gravity = app.add_option("--gravity", gravity, "Gravitational acceleration");
  auto* o_hbar = app.add_option("--hbar", hbar, "Reduced Planck constant");
  auto* o_x0 = app.add_option("--x0", x0, "Drop height / packet centre");
  auto* o_sigma = app.add_option("--sigma", sigma, "Packet width (variance sigma^2/4)");
  auto* o_alpha = app.add_option("--alpha", alpha, "Initial position dispersion in units of l_g^2");
  auto* o_nmax = app.add_option("--nmax", n_max, "Number of eigenstates");
  auto* o_nterms = app.add_option("--nterms", n_terms, "Fourier terms (default 200)");
  auto* o_tend = app.add_option("--tend", t_end, "End time");
  auto* o_dt = app.add_option("--dt", dt, "Output / integration step (default T/1000)");
  app.add_option("--out", out_path, "Output CSV path (default stdout)");
  app.add_flag("--no-quantum", no_quantum, "compare: skip the spectral solver");
  app.add_flag("--envelope-reset", envelope_reset, "compare: restart dispersions at each apex");

  const char* names[] = {"spectrum", "classical", "quantum", "moments", "compare"};
  for (const char* name : names) app.add_subcommand(name, std::string("Run the ") + name + " scenario")->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  ScenarioConfig cfg;
  try {
    cfg.kind = parse_kind(app.get_subcommands().front()->get_name());
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  if (o_preset->count() > 0) cfg.preset = preset;
  copy_if_set(o_mass, mass, cfg.mass);
  copy_if_set(o_gravity, gravity, cfg.gravity);
  copy_if_set(o_hbar, hbar, cfg.hbar);
  copy_if_set(o_x0, x0, cfg.x0);
  copy_if_set(o_sigma, sigma, cfg.sigma);
  copy_if_set(o_alpha, alpha, cfg.alpha);
  copy_if_set(o_nmax, n_max, cfg.n_max);
  copy_if_set(o_nterms, n_terms, cfg.n_terms);
  copy_if_set(o_tend, t_end, cfg.t_end);
  copy_if_set(o_dt, dt, cfg.dt);
  cfg.quantum = !no_quantum;
  cfg.envelope_reset = envelope_reset;

  RunResult result;
  try {
    result = run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bouncer::DomainError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bouncer::UnsupportedConfiguration& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const bouncer::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }

  if (out_path.empty()) {
    write_csv(std::cout, result.table);
  } else {
    std::ofstream file(out_path, std::ios::binary);
    if (!file) {
      std::cerr << "error: cannot open '" << out_path << "' for writing\n";
      return kExitUsage;
    }
    write_csv(file, result.table);
  }

  for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& f : result.failures) std::cerr << "failure: " << f << '\n';
  return result.failures.empty() ? 0 : kExitNumerical;
}
