#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "haarlab/bmo.hpp"
#include "haarlab/field.hpp"
#include "haarlab/linear_operator.hpp"

namespace haarlab {

enum class Backend { kShift, kHilbert };

std::string to_string(Backend b);
/// "shift" or "hilbert"; throws InvalidConfig.
Backend backend_from_string(const std::string& name);

enum class GeneratorKind { kGaussian, kSingleRectangle, kScalarEmbedded, kDiagonalScalars, kRankOne };

/// Parsed generator name. Accepted spellings:
///   gaussian | random-gaussian-coefficients
///   single-rectangle
///   scalar-embedded(i,j)      1-based entry, default (1,1)
///   diagonal-scalars
///   rank-one | rank-one-coefficients
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kGaussian;
  int row = 0;  // 0-based
  int col = 0;

  /// Throws UnknownSpec.
  static GeneratorSpec parse(const std::string& text);
  std::string name() const;
};

struct ExperimentConfig {
  int depth = 3;
  int dim = 1;
  int trials = 20;
  double tolerance = 1e-10;
  Backend backend = Backend::kShift;
  std::string generator = "gaussian";
  std::uint64_t seed = 1;
  std::string out = "report.json";
  std::string emit_csv;  // empty: no CSV output

  /// Throws InvalidConfig (grid limits, trials >= 1, tolerance > 0, generator name).
  void validate() const;
};

nlohmann::ordered_json to_json(const ExperimentConfig& c);
/// Fields absent from the document keep the values already in `base`.
ExperimentConfig config_from_json(const nlohmann::ordered_json& doc, ExperimentConfig base = {});

/// splitmix64 of master + (trial + 1) * golden gamma; the per-trial seed rule.
std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial);

/// Symbol with fully cancellative coefficients only (levels < N on both
/// axes), a deterministic function of (spec, shape, seed).
MatrixSpectrum2D generate_symbol(const GeneratorSpec& spec, FieldShape shape, std::uint64_t seed);
MatrixSpectrum2D generate_symbol(const std::string& spec, FieldShape shape, std::uint64_t seed);
/// Single coefficient A at (rect, cancellative x cancellative).
MatrixSpectrum2D single_rectangle_symbol(FieldShape shape, const DyadicRectangle& rect, const CMatrix& a);

/// Random vector spectrum: gaussian coefficients on fully cancellative
/// slots with levels <= max_level (negative: every slot, means included).
VectorSpectrum2D random_field(FieldShape shape, std::uint64_t seed, int max_level = -1);

/// The iterated commutator of the chosen backend, on coefficients.
LinearOperator commutator_for(const MatrixSpectrum2D& symbol, Backend backend);

struct SandwichRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string generator;
  double bmo = 0.0;
  double norm = 0.0;
  bool converged = true;
  bool degenerate = false;
  /// norm / bmo, absent when degenerate.
  std::optional<double> ratio;
  /// norm / (d bmo) and d^2 norm / bmo, the two sides of the sandwich.
  std::optional<double> upper_ratio;
  std::optional<double> lower_ratio;
  /// Commutator norms of the scalar entries b_ij, row-major.
  std::vector<double> entry_norms;
};

nlohmann::ordered_json to_json(const SandwichRecord& r);

struct SandwichSummary {
  int nondegenerate = 0;
  int unconverged = 0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max_ratio / min_ratio (0 when no trial is nondegenerate).
  double spread = 0.0;
  bool finite = true;
};

nlohmann::ordered_json to_json(const SandwichSummary& s);
SandwichSummary summarize(const std::vector<SandwichRecord>& records);

/// One record per trial: bmo_norm over the standard family, commutator norm
/// of the configured backend, and the scalar entry commutator norms.
std::vector<SandwichRecord> sandwich_experiment(const ExperimentConfig& config);
/// The same measurements for a given symbol.
SandwichRecord sandwich_record(const MatrixSpectrum2D& symbol, const TestSetFamily& family,
                               Backend backend, const NormOptions& options = {});

struct ReductionReport {
  Backend backend = Backend::kShift;
  int depth = 0;
  int dim = 0;
  /// (a) max over (i, j) and trials of |<C_B (f e_i), g e_j> - <C_{b_ji} f, g>|
  /// relative to max(1, |<C_{b_ji} f, g>|).
  double pairing_residual = 0.0;
  bool pairing_ok = false;
  double commutator_norm = 0.0;
  /// (b) ||C_{b_ji}|| for every entry, row-major by (j, i).
  std::vector<double> entry_norms;
  double max_entry_norm = 0.0;
  bool entry_inequality_ok = false;
  /// (c) ||B||_BMO and the sum of the single-entry norms ||b_ij E_ij||_BMO.
  double bmo = 0.0;
  std::vector<double> entry_bmo;
  double entry_bmo_sum = 0.0;
  bool chain_ok = false;
  /// Reported only: d^2 ||C_B|| / ||B||_BMO (0 when the symbol is degenerate).
  double lower_bound_ratio = 0.0;

  bool passed() const { return pairing_ok && entry_inequality_ok && chain_ok; }
};

nlohmann::ordered_json to_json(const ReductionReport& r);

/// Checks of the entrywise reduction: (a) within 1e-10, (b) and (c) with
/// 1e-9 additive slack. `trials` random scalar pairs (f, g) per entry.
ReductionReport lower_bound_reduction_check(const MatrixSpectrum2D& symbol, int trials,
                                            Backend backend, std::uint64_t seed,
                                            const TestSetFamily& family);

/// A named hard assertion in a suite report.
struct Check {
  std::string name;
  double value = 0.0;
  std::string relation = "<=";  // how value compares to threshold when passing
  double threshold = 0.0;
  bool pass = false;
};

nlohmann::ordered_json to_json(const Check& c);

struct SuiteResult {
  nlohmann::ordered_json report;
  std::vector<Check> failures;
  bool passed() const { return failures.empty(); }
};

/// Suites: identities, paraproducts, bmo, sandwich, lower-bound, petermichl,
/// all. Throws UnknownSpec for other names. The report holds one section per
/// suite run; the "timestamp" field is the only run-dependent content.
SuiteResult run_suite(const std::string& name, const ExperimentConfig& config);

const std::vector<std::string>& suite_names();

/// Rebuilds the bmo witnesses recorded in a report and recomputes their values.
/// Returns the largest mismatch between recorded and recomputed norms.
double replay_witnesses(const nlohmann::ordered_json& report);

}  // namespace haarlab
