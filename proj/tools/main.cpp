// nispin: run spin-flip and spin-current scenarios from a config file and
// write CSV.

#include "selftest.hpp"

#include "nispin/scenario.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace nispin;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

struct Options {
  std::string config;
  std::string out;
  int nodes = 0;
  double fd_step = 0.0;
  std::uint64_t seed = 20240601;
  unsigned threads = 0;
  double time = 0.0;
};

ConfigDocument load(const Options& o) {
  std::ifstream f(o.config);
  if (!f) throw ConfigError("", 0, "cannot read config '" + o.config + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  ConfigDocument doc = parse_document(ss.str());
  if (o.nodes > 0) override_number(doc, "numerics.nodes", o.nodes);
  if (o.fd_step > 0.0) override_number(doc, "numerics.fd_step", o.fd_step);
  return doc;
}

// --out, else $NISPIN_OUT_DIR/<name>.csv, else stdout.
void write(const Table& t, const Options& o, const std::string& name) {
  std::string path = o.out;
  if (path.empty()) {
    if (const char* dir = std::getenv("NISPIN_OUT_DIR"); dir && *dir)
      path = (std::filesystem::path(dir) / (name + ".csv")).string();
  }
  if (path.empty()) {
    emit_csv(t, std::cout);
    std::cout.flush();
  } else {
    emit_csv(t, path);
    std::cerr << "wrote " << t.rows.size() << " rows to " << path << "\n";
  }
}

Scenario single(const Options& o) {
  auto cfg = config_from_document(load(o));
  if (!std::holds_alternative<Scenario>(cfg))
    throw ConfigError("sweep.parameter", 0, "this command takes a single scenario; use 'sweep'");
  return std::get<Scenario>(cfg);
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spin flips and spin currents in accelerated, rotating frames"};
  app.require_subcommand(1);
  Options o;

  const auto numerics = [&](CLI::App* sub) {
    sub->add_option("--out", o.out, "CSV output path");
    sub->add_option("--nodes", o.nodes, "quadrature nodes (overrides config)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--fd-step", o.fd_step, "finite-difference step (overrides config)")
        ->check(CLI::PositiveNumber);
  };

  auto* run_cmd = app.add_subcommand("run", "run one scenario over its time grid");
  run_cmd->add_option("config", o.config)->required();
  numerics(run_cmd);

  auto* sweep_cmd = app.add_subcommand("sweep", "run a parameter sweep");
  sweep_cmd->add_option("config", o.config)->required();
  sweep_cmd->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  numerics(sweep_cmd);

  auto* tensor_cmd = app.add_subcommand("tensor", "spin-current tensor on the worldline");
  tensor_cmd->add_option("config", o.config)->required();
  tensor_cmd->add_option("--time", o.time, "worldline time");
  numerics(tensor_cmd);

  auto* precess_cmd = app.add_subcommand("precess", "classical spin precession trajectory");
  precess_cmd->add_option("config", o.config)->required();
  precess_cmd->add_option("--out", o.out, "CSV output path");

  auto* presets_cmd = app.add_subcommand("presets", "list scenario presets");

  auto* selftest_cmd = app.add_subcommand("selftest", "quick randomized self-check");
  selftest_cmd->add_option("--seed", o.seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  if (*presets_cmd) {
    for (const auto& p : preset_catalog())
      std::cout << to_string(p.preset) << "\n    " << p.summary << "\n    requires: "
                << p.required << "\n";
    return 0;
  }
  if (*selftest_cmd) return run_selftest(o.seed, std::cout) ? 0 : kExitNumerical;

  if (*run_cmd)
    return guarded([&] {
      const Scenario s = single(o);
      write(run(s), o, s.name);
    });
  if (*sweep_cmd)
    return guarded([&] {
      auto cfg = config_from_document(load(o));
      if (!std::holds_alternative<SweepSpec>(cfg))
        throw ConfigError("sweep.parameter", 0, "missing required field 'sweep.parameter'");
      const SweepSpec& spec = std::get<SweepSpec>(cfg);
      write(run_sweep(spec, o.threads), o, spec.scenario_for(0).name + "_sweep");
    });
  if (*tensor_cmd)
    return guarded([&] {
      const Scenario s = single(o);
      write(spin_current_table(s, o.time), o, s.name + "_tensor");
    });
  if (*precess_cmd)
    return guarded([&] {
      const Scenario s = single(o);
      write(precession_table(s), o, s.name + "_precession");
    });
  return kExitConfig;
}
