// lab: run one acceptance suite (or all) and write a JSON report.
//
//   lab <suite> --depth N --dim d --trials T --seed S --backend shift|hilbert
//       --out report.json [--emit-csv dir] [--config file.json]
//   lab --replay-witness report.json
//
// Exit status: 0 all checks pass, 1 some check failed, 2 invalid config.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "haarlab/errors.hpp"
#include "haarlab/experiments.hpp"
#include "haarlab/serialize.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInvalid = 2;

haarlab::Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw haarlab::InvalidConfig("cannot open " + path);
  try {
    return haarlab::Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw haarlab::InvalidConfig(path + ": " + e.what());
  }
}

int replay(const std::string& path) {
  const double gap = haarlab::replay_witnesses(read_json(path));
  const bool ok = gap <= 1e-12;
  std::cout << "witness replay " << (ok ? "matches" : "differs") << " (max gap " << gap << ")\n";
  return ok ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dyadic commutator lab"};
  haarlab::ExperimentConfig flags;
  std::string suite, backend = "shift", config_path, replay_path;

  app.add_option("suite", suite, "identities | paraproducts | bmo | sandwich | lower-bound | petermichl | all");
  auto* o_depth = app.add_option("--depth", flags.depth, "grid depth N (side 2^N)");
  auto* o_dim = app.add_option("--dim", flags.dim, "vector dimension d");
  auto* o_trials = app.add_option("--trials", flags.trials, "random trials per check");
  auto* o_seed = app.add_option("--seed", flags.seed, "master seed");
  auto* o_tol = app.add_option("--tolerance", flags.tolerance, "identity tolerance");
  auto* o_backend = app.add_option("--backend", backend, "shift | hilbert");
  auto* o_gen = app.add_option("--generator", flags.generator, "symbol generator");
  auto* o_out = app.add_option("--out", flags.out, "report path");
  auto* o_csv = app.add_option("--emit-csv", flags.emit_csv, "directory for CSV exports");
  app.add_option("--config", config_path, "JSON config; flags override its values");
  app.add_option("--replay-witness", replay_path, "recompute the bmo witnesses stored in a report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (!replay_path.empty()) return replay(replay_path);
    if (suite.empty()) throw haarlab::InvalidConfig("missing suite name");

    haarlab::ExperimentConfig cfg;
    if (!config_path.empty()) cfg = haarlab::config_from_json(read_json(config_path));
    if (o_depth->count()) cfg.depth = flags.depth;
    if (o_dim->count()) cfg.dim = flags.dim;
    if (o_trials->count()) cfg.trials = flags.trials;
    if (o_seed->count()) cfg.seed = flags.seed;
    if (o_tol->count()) cfg.tolerance = flags.tolerance;
    if (o_backend->count()) cfg.backend = haarlab::backend_from_string(backend);
    if (o_gen->count()) cfg.generator = flags.generator;
    if (o_out->count()) cfg.out = flags.out;
    if (o_csv->count()) cfg.emit_csv = flags.emit_csv;

    const haarlab::SuiteResult result = haarlab::run_suite(suite, cfg);
    std::ofstream out(cfg.out);
    if (!out) throw haarlab::InvalidConfig("cannot write " + cfg.out);
    out << result.report.dump(2) << '\n';

    for (const auto& f : result.failures)
      std::cerr << "FAILED " << f.name << ": " << f.value << " (want " << f.relation << ' ' << f.threshold
                << ")\n";
    std::cout << suite << ": " << (result.passed() ? "pass" : "fail") << " -> " << cfg.out << '\n';
    return result.passed() ? kExitPass : kExitFail;
  } catch (const haarlab::InvalidConfig& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const haarlab::UnknownSpec& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const haarlab::LabError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
