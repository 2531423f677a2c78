#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "qbgk/config.hpp"
#include "qbgk/diagnostics.hpp"
#include "qbgk/errors.hpp"
#include "qbgk/io.hpp"

namespace fs = std::filesystem;
using namespace qbgk;

namespace {

enum Exit { kOk = 0, kConfig = 2, kSolver = 3, kInvariant = 4, kOther = 1 };

struct Options {
  std::string scenario, config, output;
  std::optional<int> order, grid;
  std::optional<double> dt, t_end;
  bool strict = false, check = false;
};

SimConfig resolve(const Options& o) {
  if (o.scenario.empty() && o.config.empty()) throw ConfigError("scenario required (--scenario or --config)");
  if (!o.scenario.empty() && !o.config.empty()) throw ConfigError("--scenario and --config are exclusive");
  SimConfig c = o.config.empty() ? scenario_preset(o.scenario) : load_config(o.config);
  if (o.order) c.scheme_order = *o.order;
  if (o.grid) c.grid_intervals = *o.grid;
  if (o.dt) c.dt = *o.dt;
  if (o.t_end) c.t_end = *o.t_end;
  if (!o.output.empty()) c.output_dir = o.output;
  if (o.strict) c.positivity = PositivityPolicy::Strict;
  validate(c);
  return c;
}

void save(const DiagnosticsRecorder& rec, const Simulation& sim, const SimConfig& c, bool spatial) {
  fs::create_directories(c.output_dir);
  write_series(rec.records(), sim.phase(), (fs::path(c.output_dir) / "series.csv").string());
  if (spatial) {
    const auto rows = spatial_profile(sim);
    write_profile(rows, sim.phase(), (fs::path(c.output_dir) / "profile.csv").string());
  }
  std::ofstream(fs::path(c.output_dir) / "config.cfg") << format_config(c);
}

// Invariant suite on a finished run: conservation drift between consecutive
// records, entropy decay for the first-order scheme, positivity and the
// fermion bound. Returns the number of failures.
int check_invariants(const DiagnosticsRecorder& rec, const Simulation& sim, const SimConfig& c) {
  const auto& r = rec.records();
  double drift = 0.0;
  for (std::size_t i = 1; i < r.size(); ++i)
    drift = std::max(drift, conservation_drift(r[i - 1].totals, r[i].totals));
  int failures = 0;
  auto line = [&](bool ok, const std::string& what) {
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
  };
  char buf[160];
  std::snprintf(buf, sizeof buf, "conservation: max drift between records %.3e", drift);
  line(drift <= 1e-12 * static_cast<double>(std::max<std::size_t>(1, c.stride)), buf);
  if (c.scheme_order == 1) {
    double worst = 0.0;
    for (std::size_t i = 1; i < r.size(); ++i) worst = std::max(worst, r[i].H - r[i - 1].H);
    std::snprintf(buf, sizeof buf, "entropy: largest increase %.3e", worst);
    line(worst <= 1e-13, buf);
  }
  const auto& p = sim.last_positivity();
  std::snprintf(buf, sizeof buf, "positivity: %zu warning steps, final min f %.3e",
                sim.positivity_warnings(), p.min_value);
  line(sim.positivity_warnings() == 0 && p.negative_nodes == 0, buf);
  std::snprintf(buf, sizeof buf, "fermion bound: final max f %.6f", p.max_fermion);
  line(p.fermion_violations == 0, buf);
  return failures;
}

int run(const Options& o) {
  SimConfig c;
  try {
    c = resolve(o);
  } catch (const Error& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  }

  std::optional<Simulation> sim;
  double dt = 0.0;
  try {
    auto setup = build_setup(c);
    auto f = initial_fields(c, setup);
    sim.emplace(std::move(setup), std::move(f));
    dt = resolve_dt(c, *sim);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return kInvariant;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return kSolver;
  }

  DiagnosticsRecorder rec;
  int code = kOk;
  try {
    sim->run(c.t_end, dt, c.stride, [&](const Simulation& s) { rec.record(s); });
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation at t=" << sim->state().time << ": " << e.what() << "\n";
    code = kInvariant;
  } catch (const SolverError& e) {
    std::cerr << "solver error at t=" << sim->state().time << ": " << e.what() << "\n";
    code = kSolver;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    code = kConfig;
  } catch (const DomainError& e) {
    std::cerr << "invariant violation at t=" << sim->state().time << ": " << e.what() << "\n";
    code = kInvariant;
  }

  if (o.check) {
    if (code != kOk) return code;
    return check_invariants(rec, *sim, c) == 0 ? kOk : kInvariant;
  }

  try {
    save(rec, *sim, c, !c.homogeneous);
  } catch (const Error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return code == kOk ? kOther : code;
  }
  if (code == kOk && o.strict && sim->positivity_warnings() > 0) {
    std::cerr << "invariant violation: " << sim->positivity_warnings() << " positivity warnings\n";
    code = kInvariant;
  }
  const auto& w = sim->worst_positivity();
  std::printf("min f %.3e, max fermion f %.12f, steps with violations %zu\n", w.min_value,
              w.max_fermion, sim->positivity_warnings());
  if (code == kOk)
    std::cout << "wrote " << rec.records().size() << " records to " << c.output_dir << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-species quantum BGK solver"};
  app.require_subcommand(1);
  Options o;
  auto* r = app.add_subcommand("run", "Run a scenario preset or config file");
  r->add_option("--scenario", o.scenario, "Preset name");
  r->add_option("--config", o.config, "Config file");
  r->add_option("--output", o.output, "Output directory");
  r->add_option("--order", o.order, "Time scheme order")->check(CLI::IsMember({1, 2}));
  r->add_option("--dt", o.dt, "Time step");
  r->add_option("--t-end", o.t_end, "Final time");
  r->add_option("--grid", o.grid, "Momentum grid intervals per axis");
  r->add_flag("--strict", o.strict, "Abort on any invariant violation");
  r->add_flag("--check", o.check, "Run the invariant suite instead of writing output");
  auto* l = app.add_subcommand("list", "List scenario presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfig;
  }
  if (l->parsed()) {
    for (const auto& n : preset_names()) std::cout << n << "\n";
    return kOk;
  }
  try {
    return run(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOther;
  }
}
