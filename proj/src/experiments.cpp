#include "haarlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <regex>
#include <sstream>

#include "haarlab/haar.hpp"
#include "haarlab/hilbert.hpp"
#include "haarlab/operators.hpp"
#include "haarlab/paraproducts.hpp"
#include "haarlab/serialize.hpp"

namespace haarlab {
namespace {

using Rng = std::mt19937_64;

Complex gaussian(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

CMatrix gaussian_matrix(Rng& rng, int rows, int cols) {
  CMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = gaussian(rng);
  return m;
}

// Fully cancellative slots on one axis: heaps 1 .. n-1.
bool cancellative_slot(int slot, int max_level) {
  if (slot < 1) return false;
  return max_level < 0 || DyadicInterval::from_heap(slot).level <= max_level;
}

VectorSpectrum2D lift(const VectorSpectrum2D& scalar, int dim, int component) {
  VectorSpectrum2D out(FieldShape{scalar.depth(), dim});
  for (int x = 0; x < scalar.side(); ++x)
    for (int y = 0; y < scalar.side(); ++y) out.at(x, y)(component) = scalar.at(x, y)(0);
  return out;
}

double relative_gap(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

// Collects checks for one suite section.
class Section {
 public:
  explicit Section(std::string name) : name_(std::move(name)) {}

  void at_most(const std::string& what, double value, double threshold) {
    add({what, value, "<=", threshold, std::isfinite(value) && value <= threshold});
  }
  void above(const std::string& what, double value, double threshold) {
    add({what, value, ">", threshold, std::isfinite(value) && value > threshold});
  }
  void holds(const std::string& what, bool ok) { add({what, ok ? 1.0 : 0.0, "==", 1.0, ok}); }

  Json& data() { return data_; }
  const std::vector<Check>& failures() const { return failures_; }

  Json finish() {
    Json out;
    out["status"] = failures_.empty() ? "pass" : "fail";
    out["checks"] = checks_;
    for (auto& [k, v] : data_.items()) out[k] = v;
    return out;
  }

 private:
  void add(Check c) {
    c.name = name_ + "/" + c.name;
    checks_.push_back(to_json(c));
    if (!c.pass) failures_.push_back(std::move(c));
  }

  std::string name_;
  Json checks_ = Json::array();
  Json data_ = Json::object();
  std::vector<Check> failures_;
};

void write_text(const std::string& dir, const std::string& file, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream os(std::filesystem::path(dir) / file);
  if (!os) throw InvalidConfig("cannot write " + file + " under " + dir);
  os << body;
}

void write_matrix_csv(const std::string& dir, const std::string& file, const Eigen::MatrixXd& m) {
  std::ostringstream os;
  os << std::setprecision(17);
  write_real_csv(os, m);
  write_text(dir, file, os.str());
}

FieldShape shape_of(const ExperimentConfig& c) { return {c.depth, c.dim}; }

// ---------------------------------------------------------------------------
// Suites.

Json identities_suite(const ExperimentConfig& cfg, Section& sec) {
  const FieldShape shape = shape_of(cfg);
  double roundtrip = 0.0, parseval = 0.0, decomposition = 0.0, product = 0.0, t2_gap = 0.0;
  const int safe = cfg.depth - 2;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = trial_seed(cfg.seed, t);
    Rng rng(s);
    SampledField2D f(shape);
    for (Eigen::Index i = 0; i < f.data().size(); ++i) f.data()(i) = gaussian(rng);
    const VectorSpectrum2D c = analyze2d(f);
    roundtrip = std::max(roundtrip, (synthesize2d(c).data() - f.data()).norm() / f.data().norm());
    parseval = std::max(parseval, std::abs(norm(c) - norm(f)) / norm(f));

    const MatrixSpectrum2D b = generate_symbol(cfg.generator, shape, s ^ 0x5bd1e995u);
    const VectorSpectrum2D g = random_field(shape, s + 17);
    product = std::max(product, product_identity_check(b, g).residual);
    if (safe >= 0) {
      const MatrixSpectrum2D bs = restrict_cancellative(b, safe);
      const VectorSpectrum2D fs = random_field(shape, s + 29, safe);
      if (bs.data().norm() > 0.0 && fs.data().norm() > 0.0)
        decomposition = std::max(decomposition, decomposition_check(bs, fs).residual);
    }
    const VectorSpectrum2D a = cross_term(2, b, true)(g);
    const VectorSpectrum2D e = cross_term(2, b, false)(g);
    t2_gap = std::max(t2_gap, norm(a - e) / std::max(1.0, norm(e)));
  }
  sec.at_most("haar_roundtrip", roundtrip, 1e-12);
  sec.at_most("parseval", parseval, 1e-12);
  sec.at_most("decomposition_residual", decomposition, cfg.tolerance);
  sec.at_most("product_identity_residual", product, cfg.tolerance);
  sec.at_most("cross_term_T2_cases_vs_generic", t2_gap, cfg.tolerance);

  if (safe >= 0) {
    const LinearOperator p = cancellative_projection(shape, safe, -1);
    const NormEstimate est = operator_norm(shift_operator(shape, Axis::kX) * p);
    sec.at_most("shift_x_safe_norm_minus_1", std::abs(est.value - 1.0), 1e-10);
    sec.data()["shift_x_safe_norm"] = est.value;
  }
  Json j;
  j["trials"] = cfg.trials;
  j["max_residuals"] = {{"haar_roundtrip", roundtrip},
                        {"parseval", parseval},
                        {"decomposition", decomposition},
                        {"product_identity", product},
                        {"cross_term_T2", t2_gap}};
  return j;
}

Json paraproducts_suite(const ExperimentConfig& cfg, Section& sec) {
  const FieldShape shape = shape_of(cfg);
  const TestSetFamily family = TestSetFamily::standard(cfg.depth, cfg.seed);
  double adjoint_gap = 0.0, duality_gap = 0.0;
  std::vector<double> bound(5, 0.0);
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = trial_seed(cfg.seed, t);
    const MatrixSpectrum2D b = generate_symbol(cfg.generator, shape, s);
    const VectorSpectrum2D f = random_field(shape, s + 1);
    const VectorSpectrum2D g = random_field(shape, s + 2);

    for (auto v : {ParaproductVariant::kP2, ParaproductVariant::kP3}) {
      ParaproductSpec spec{v, b, SignPattern::kChildSign, 1, false};
      const Complex lhs = inner(apply_paraproduct(spec, f), g);
      const Complex rhs = inner(f, apply_paraproduct(paraproduct_adjoint(spec), g));
      adjoint_gap = std::max(adjoint_gap, relative_gap(lhs, rhs));
    }
    const Complex p3 = inner(apply_paraproduct({ParaproductVariant::kP3, b}, f), g);
    const Complex p4 = inner(apply_paraproduct({ParaproductVariant::kP4, b}, f), g);
    duality_gap = std::max(duality_gap, relative_gap(p3, inner(b, pi1(f, g))));
    duality_gap = std::max(duality_gap, relative_gap(p4, inner(b, pi2(f, g))));

    const double bmo = bmo_norm(b, family).openset_norm;
    if (bmo > 0.0) {
      const auto variants = {ParaproductVariant::kP1, ParaproductVariant::kP2, ParaproductVariant::kP3,
                             ParaproductVariant::kP4, ParaproductVariant::kP5};
      int i = 0;
      for (auto v : variants) {
        const double r = norm(apply_paraproduct({v, b}, f)) / norm(f) / (cfg.dim * bmo);
        bound[i] = std::max(bound[i], r);
        ++i;
      }
    }
  }
  sec.at_most("adjoint_pairing", adjoint_gap, cfg.tolerance);
  sec.at_most("pi_duality", duality_gap, cfg.tolerance);
  Json rec;
  const char* names[] = {"P1", "P2", "P3", "P4", "P5"};
  for (int i = 0; i < 5; ++i) {
    rec[names[i]] = bound[i];
    sec.holds(std::string("bounded_") + names[i], std::isfinite(bound[i]));
  }
  Json j;
  j["trials"] = cfg.trials;
  j["adjoint_gap"] = adjoint_gap;
  j["duality_gap"] = duality_gap;
  j["max_norm_over_d_bmo"] = rec;
  return j;
}

Json bmo_suite(const ExperimentConfig& cfg, Section& sec) {
  const FieldShape shape = shape_of(cfg);
  const TestSetFamily family = TestSetFamily::standard(cfg.depth, cfg.seed);
  const bool exhaustive = cfg.depth <= 2;
  const TestSetFamily cells = exhaustive ? TestSetFamily::exhaustive_cells(cfg.depth) : family;
  double order_gap = 0.0, exhaustive_gap = 0.0, pointwise_excess = -1e300, rect_excess = -1e300;
  double ratio_lo = 1e300, ratio_hi = 0.0, s_tilde_hi = 0.0, c1_excess = -1e300;
  bool trace_ok = true;
  Json witnesses = Json::array();
  std::ostringstream csv;
  csv << std::setprecision(17) << "trial,rect_norm,openset_norm,trace_quantity,C1_emp,C2\n";
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = trial_seed(cfg.seed, t);
    const MatrixSpectrum2D b = generate_symbol(cfg.generator, shape, s);
    const BmoReport rep = bmo_norm(b, family);
    rect_excess = std::max(rect_excess, rep.rect_norm - rep.openset_norm);
    order_gap = std::max(order_gap, std::abs(bmo_norm(b.adjoint(), family).openset_norm - rep.openset_norm) /
                                        std::max(1.0, rep.openset_norm));
    if (exhaustive)
      exhaustive_gap = std::max(exhaustive_gap, std::abs(bmo_norm(b, cells).openset_norm - rep.openset_norm));
    trace_ok = trace_ok && trace_bound_check(b, family).holds;

    const CarlesonReport car = carleson_check(carleson_weights(b), family, 8, s + 3);
    if (car.c2 > 0.0) {
      ratio_lo = std::min(ratio_lo, car.ratio);
      ratio_hi = std::max(ratio_hi, car.ratio);
    }
    if (car.c1_exact > 0.0) c1_excess = std::max(c1_excess, car.c1_empirical - car.c1_exact);

    const VectorSpectrum2D f = random_field(shape, s + 5);
    const VectorSpectrum2D g = random_field(shape, s + 7);
    const ScalarField lhs = square_function(pi1(f, g));
    const ScalarField rhs = strong_maximal(pointwise_norm(synthesize2d(f))).cwiseProduct(square_function(g));
    pointwise_excess = std::max(pointwise_excess, (lhs - rhs).maxCoeff());
    s_tilde_hi = std::max(s_tilde_hi, l2_norm(s_tilde(f)) / norm(f));

    Json w;
    w["trial"] = t;
    w["seed"] = s;
    w["report"] = to_json(rep);
    witnesses.push_back(w);
    csv << t << ',' << rep.rect_norm << ',' << rep.openset_norm << ',' << rep.trace_quantity << ','
        << car.c1_empirical << ',' << car.c2 << '\n';
  }
  sec.at_most("rect_norm_minus_openset_norm", rect_excess, 0.0);
  sec.at_most("order_symmetry", order_gap, 1e-12);
  sec.holds("trace_bound", trace_ok);
  sec.at_most("pointwise_square_maximal_excess", pointwise_excess, 1e-12);
  if (exhaustive) sec.at_most("exhaustive_family_gap", exhaustive_gap, 1e-12);
  if (c1_excess > -1e300) sec.at_most("C1_emp_minus_C1_exact", c1_excess, 1e-9);
  if (!cfg.emit_csv.empty()) write_text(cfg.emit_csv, "bmo.csv", csv.str());

  Json j;
  j["trials"] = cfg.trials;
  j["family_size"] = family.size();
  j["generator"] = cfg.generator;
  j["carleson_ratio_band"] = {ratio_hi > 0.0 ? ratio_lo : 0.0, ratio_hi};
  j["s_tilde_max_ratio"] = s_tilde_hi;
  j["witnesses"] = witnesses;
  return j;
}

Json sandwich_suite(const ExperimentConfig& cfg, Section& sec) {
  const std::vector<SandwichRecord> records = sandwich_experiment(cfg);
  const SandwichSummary sum = summarize(records);
  sec.holds("ratios_finite", sum.finite);
  Json j;
  // At depth 1 the only cancellative level is the finest one, which the shift annihilates.
  if (cfg.backend == Backend::kShift && cfg.depth < 2)
    j["note"] = "shift is identically zero at depth 1; positivity not checked";
  else if (sum.nondegenerate > 0)
    sec.above("min_ratio", sum.min_ratio, 0.0);
  j["backend"] = to_string(cfg.backend);
  j["summary"] = to_json(sum);
  Json rs = Json::array();
  for (const auto& r : records) rs.push_back(to_json(r));
  j["records"] = rs;
  if (!cfg.emit_csv.empty()) {
    std::ostringstream os;
    os << std::setprecision(17) << "trial,seed,bmo,norm,ratio,degenerate,converged\n";
    for (const auto& r : records)
      os << r.trial << ',' << r.seed << ',' << r.bmo << ',' << r.norm << ',' << r.ratio.value_or(0.0) << ','
         << r.degenerate << ',' << r.converged << '\n';
    write_text(cfg.emit_csv, "sandwich.csv", os.str());
  }
  return j;
}

Json lower_bound_suite(const ExperimentConfig& cfg, Section& sec) {
  const FieldShape shape = shape_of(cfg);
  const TestSetFamily family = TestSetFamily::standard(cfg.depth, cfg.seed);
  Json reps = Json::array();
  double pairing = 0.0, entry_excess = -1e300, chain_excess = -1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    const std::uint64_t s = trial_seed(cfg.seed, t);
    const MatrixSpectrum2D b = generate_symbol(cfg.generator, shape, s);
    const ReductionReport r = lower_bound_reduction_check(b, 3, cfg.backend, s + 11, family);
    pairing = std::max(pairing, r.pairing_residual);
    entry_excess = std::max(entry_excess, r.max_entry_norm - r.commutator_norm);
    chain_excess = std::max(chain_excess, r.bmo - r.entry_bmo_sum);
    reps.push_back(to_json(r));
  }
  sec.at_most("pairing_identity", pairing, 1e-10);
  sec.at_most("entry_norm_excess", entry_excess, 1e-9);
  sec.at_most("bmo_chain_excess", chain_excess, 1e-9);
  Json j;
  j["backend"] = to_string(cfg.backend);
  j["trials"] = cfg.trials;
  j["reports"] = reps;
  return j;
}

Json petermichl_suite(const ExperimentConfig& cfg, Section& sec) {
  const int n = 1 << cfg.depth;
  std::vector<int> sizes;
  for (int m = 1; m < n; m *= 4) sizes.push_back(m);
  sizes.push_back(n);

  Json fits = Json::array();
  double prev = std::numeric_limits<double>::infinity(), worst_step = -1e300;
  KernelMatrix all;
  for (int m : sizes) {
    std::vector<ShiftedGrid> grids;
    for (int k = 0; k < m; ++k) grids.push_back({cfg.depth, k * (n / m), 1.0});
    auto [avg, fit] = petermichl_average(grids);
    fits.push_back(to_json(fit));
    worst_step = std::max(worst_step, fit.residual_rel - prev);
    prev = fit.residual_rel;
    all = avg;
  }
  sec.at_most("residual_increase_along_nested_alpha", worst_step, 1e-12);

  double circulant = 0.0;
  for (int t = 0; t < n; ++t)
    for (int x = 0; x < n; ++x)
      circulant = std::max(circulant, std::abs(all.values(t, x) - all.values(0, ((x - t) % n + n) % n)));
  sec.at_most("full_orbit_circulant", circulant, 1e-12);

  double rows = 0.0;
  std::vector<ShiftedGrid> dilated;
  for (double r : {1.0, std::cbrt(2.0), std::cbrt(4.0)})
    for (int a = 0; a < n; ++a) {
      dilated.push_back({cfg.depth, a, r});
      rows = std::max(rows, shifted_shift_kernel(dilated.back()).values.rowwise().sum().cwiseAbs().maxCoeff());
    }
  sec.at_most("kernel_row_sums", rows, 1e-12);
  const auto [davg, dfit] = petermichl_average(dilated);

  if (!cfg.emit_csv.empty()) {
    write_matrix_csv(cfg.emit_csv, "kernel_all_alpha.csv", all.values);
    write_matrix_csv(cfg.emit_csv, "kernel_all_alpha_r.csv", davg.values);
    write_matrix_csv(cfg.emit_csv, "kernel_hilbert.csv", hilbert_kernel(cfg.depth).values);
  }
  Json j;
  j["alpha_sample_sizes"] = sizes;
  j["nested_fits"] = fits;
  j["dilated_fit"] = to_json(dfit);
  return j;
}

using SuiteFn = Json (*)(const ExperimentConfig&, Section&);

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"identities", identities_suite}, {"paraproducts", paraproducts_suite},
      {"bmo", bmo_suite},               {"sandwich", sandwich_suite},
      {"lower-bound", lower_bound_suite}, {"petermichl", petermichl_suite},
  };
  return table;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(Backend b) { return b == Backend::kShift ? "shift" : "hilbert"; }

Backend backend_from_string(const std::string& name) {
  if (name == "shift") return Backend::kShift;
  if (name == "hilbert") return Backend::kHilbert;
  throw InvalidConfig("unknown backend '" + name + "' (expected shift or hilbert)");
}

GeneratorSpec GeneratorSpec::parse(const std::string& text) {
  static const std::regex embedded(R"(scalar-embedded(?:\((\d+),(\d+)\))?)");
  std::smatch m;
  GeneratorSpec g;
  if (text == "gaussian" || text == "random-gaussian-coefficients") {
    g.kind = GeneratorKind::kGaussian;
  } else if (text == "single-rectangle") {
    g.kind = GeneratorKind::kSingleRectangle;
  } else if (text == "diagonal-scalars") {
    g.kind = GeneratorKind::kDiagonalScalars;
  } else if (text == "rank-one" || text == "rank-one-coefficients") {
    g.kind = GeneratorKind::kRankOne;
  } else if (std::regex_match(text, m, embedded)) {
    g.kind = GeneratorKind::kScalarEmbedded;
    if (m[1].matched) {
      g.row = std::stoi(m[1]) - 1;
      g.col = std::stoi(m[2]) - 1;
      if (g.row < 0 || g.col < 0) throw UnknownSpec("scalar-embedded entries are 1-based: " + text);
    }
  } else {
    throw UnknownSpec("unknown generator '" + text + "'");
  }
  return g;
}

std::string GeneratorSpec::name() const {
  switch (kind) {
    case GeneratorKind::kGaussian: return "gaussian";
    case GeneratorKind::kSingleRectangle: return "single-rectangle";
    case GeneratorKind::kScalarEmbedded:
      return "scalar-embedded(" + std::to_string(row + 1) + "," + std::to_string(col + 1) + ")";
    case GeneratorKind::kDiagonalScalars: return "diagonal-scalars";
    case GeneratorKind::kRankOne: return "rank-one";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  GridConfig{depth, dim, seed}.validate();
  if (trials < 1) throw InvalidConfig("trials must be at least 1");
  if (!(tolerance > 0.0)) throw InvalidConfig("tolerance must be positive");
  GeneratorSpec g;
  try {
    g = GeneratorSpec::parse(generator);
  } catch (const UnknownSpec& e) {
    throw InvalidConfig(e.what());
  }
  if (g.row >= dim || g.col >= dim) throw InvalidConfig("generator entry lies outside the dimension");
}

Json to_json(const ExperimentConfig& c) {
  Json j;
  j["depth"] = c.depth;
  j["dim"] = c.dim;
  j["trials"] = c.trials;
  j["tolerance"] = c.tolerance;
  j["backend"] = to_string(c.backend);
  j["generator"] = c.generator;
  j["seed"] = c.seed;
  j["out"] = c.out;
  j["emit_csv"] = c.emit_csv;
  return j;
}

ExperimentConfig config_from_json(const Json& doc, ExperimentConfig c) {
  if (!doc.is_object()) throw InvalidConfig("config must be a JSON object");
  try {
    if (doc.contains("depth")) c.depth = doc["depth"].get<int>();
    if (doc.contains("dim")) c.dim = doc["dim"].get<int>();
    if (doc.contains("trials")) c.trials = doc["trials"].get<int>();
    if (doc.contains("tolerance")) c.tolerance = doc["tolerance"].get<double>();
    if (doc.contains("backend")) c.backend = backend_from_string(doc["backend"].get<std::string>());
    if (doc.contains("generator")) c.generator = doc["generator"].get<std::string>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("out")) c.out = doc["out"].get<std::string>();
    if (doc.contains("emit_csv")) c.emit_csv = doc["emit_csv"].get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("bad config field: ") + e.what());
  }
  return c;
}

std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  std::uint64_t z = master + (trial + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

MatrixSpectrum2D single_rectangle_symbol(FieldShape shape, const DyadicRectangle& rect, const CMatrix& a) {
  if (a.rows() != shape.dim || a.cols() != shape.dim) throw DimensionMismatch("coefficient is not d x d");
  const auto [sx, sy] = basis_slots(HaarIndex2D{rect}, shape.depth);
  MatrixSpectrum2D b(shape);
  b.at(sx, sy) = a;
  return b;
}

MatrixSpectrum2D generate_symbol(const GeneratorSpec& spec, FieldShape shape, std::uint64_t seed) {
  GridConfig{shape.depth, shape.dim, seed}.validate();
  if (spec.row >= shape.dim || spec.col >= shape.dim)
    throw DimensionMismatch("generator entry lies outside the dimension");
  Rng rng(seed);
  const int n = shape.side(), d = shape.dim;
  MatrixSpectrum2D b(shape);
  if (spec.kind == GeneratorKind::kSingleRectangle) {
    std::uniform_int_distribution<int> slot(1, n - 1);
    const int sx = slot(rng);
    const int sy = slot(rng);
    b.at(sx, sy) = gaussian_matrix(rng, d, d);
    return b;
  }
  for (int sx = 1; sx < n; ++sx) {
    for (int sy = 1; sy < n; ++sy) {
      auto blk = b.at(sx, sy);
      switch (spec.kind) {
        case GeneratorKind::kGaussian: blk = gaussian_matrix(rng, d, d); break;
        case GeneratorKind::kScalarEmbedded: blk(spec.row, spec.col) = gaussian(rng); break;
        case GeneratorKind::kDiagonalScalars:
          for (int i = 0; i < d; ++i) blk(i, i) = gaussian(rng);
          break;
        case GeneratorKind::kRankOne: {
          const CMatrix u = gaussian_matrix(rng, d, 1);
          const CMatrix v = gaussian_matrix(rng, d, 1);
          blk = u * v.adjoint();
          break;
        }
        case GeneratorKind::kSingleRectangle: break;
      }
    }
  }
  return b;
}

MatrixSpectrum2D generate_symbol(const std::string& spec, FieldShape shape, std::uint64_t seed) {
  return generate_symbol(GeneratorSpec::parse(spec), shape, seed);
}

VectorSpectrum2D random_field(FieldShape shape, std::uint64_t seed, int max_level) {
  Rng rng(seed);
  VectorSpectrum2D f(shape);
  for (int sx = 0; sx < shape.side(); ++sx)
    for (int sy = 0; sy < shape.side(); ++sy) {
      if (max_level >= 0 && !(cancellative_slot(sx, max_level) && cancellative_slot(sy, max_level))) continue;
      for (int c = 0; c < shape.dim; ++c) f.at(sx, sy)(c) = gaussian(rng);
    }
  return f;
}

LinearOperator commutator_for(const MatrixSpectrum2D& symbol, Backend backend) {
  const SampledSymbol2D b = synthesize2d(symbol);
  return backend == Backend::kShift ? commutator2p_operator(b) : commutator2p_hilbert_operator(b);
}

Json to_json(const SandwichRecord& r) {
  Json j;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["generator"] = r.generator;
  j["bmo"] = r.bmo;
  j["norm"] = r.norm;
  j["converged"] = r.converged;
  j["degenerate"] = r.degenerate;
  j["ratio"] = optional_json(r.ratio);
  j["upper_ratio"] = optional_json(r.upper_ratio);
  j["lower_ratio"] = optional_json(r.lower_ratio);
  j["entry_norms"] = r.entry_norms;
  return j;
}

Json to_json(const SandwichSummary& s) {
  Json j;
  j["nondegenerate"] = s.nondegenerate;
  j["unconverged"] = s.unconverged;
  j["min_ratio"] = s.min_ratio;
  j["max_ratio"] = s.max_ratio;
  j["spread"] = s.spread;
  j["finite"] = s.finite;
  return j;
}

SandwichSummary summarize(const std::vector<SandwichRecord>& records) {
  SandwichSummary s;
  for (const auto& r : records) {
    if (!r.converged) ++s.unconverged;
    if (!r.ratio) continue;
    const double v = *r.ratio;
    if (!std::isfinite(v)) s.finite = false;
    s.min_ratio = s.nondegenerate == 0 ? v : std::min(s.min_ratio, v);
    s.max_ratio = s.nondegenerate == 0 ? v : std::max(s.max_ratio, v);
    ++s.nondegenerate;
  }
  if (s.nondegenerate > 0 && s.min_ratio > 0.0) s.spread = s.max_ratio / s.min_ratio;
  return s;
}

SandwichRecord sandwich_record(const MatrixSpectrum2D& symbol, const TestSetFamily& family, Backend backend,
                               const NormOptions& options) {
  SandwichRecord r;
  const int d = symbol.dim();
  r.bmo = bmo_norm(symbol, family).openset_norm;
  const NormEstimate est = operator_norm(commutator_for(symbol, backend), options);
  r.norm = est.value;
  r.converged = est.converged;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const NormEstimate e = operator_norm(commutator_for(symbol.entry(i, j), backend), options);
      r.entry_norms.push_back(e.value);
      r.converged = r.converged && e.converged;
    }
  r.degenerate = !(r.bmo > 1e-13 * std::max(1.0, symbol.data().norm()));
  if (!r.degenerate) {
    r.ratio = r.norm / r.bmo;
    r.upper_ratio = r.norm / (d * r.bmo);
    r.lower_ratio = d * d * r.norm / r.bmo;
  }
  return r;
}

std::vector<SandwichRecord> sandwich_experiment(const ExperimentConfig& config) {
  config.validate();
  const FieldShape shape = shape_of(config);
  const TestSetFamily family = TestSetFamily::standard(config.depth, config.seed);
  std::vector<SandwichRecord> out;
  for (int t = 0; t < config.trials; ++t) {
    const std::uint64_t s = trial_seed(config.seed, t);
    SandwichRecord r = sandwich_record(generate_symbol(config.generator, shape, s), family, config.backend);
    r.trial = t;
    r.seed = s;
    r.generator = config.generator;
    out.push_back(std::move(r));
  }
  return out;
}

Json to_json(const ReductionReport& r) {
  Json j;
  j["backend"] = to_string(r.backend);
  j["N"] = r.depth;
  j["d"] = r.dim;
  j["pairing_residual"] = r.pairing_residual;
  j["pairing_ok"] = r.pairing_ok;
  j["commutator_norm"] = r.commutator_norm;
  j["entry_norms"] = r.entry_norms;
  j["entry_inequality_ok"] = r.entry_inequality_ok;
  j["bmo"] = r.bmo;
  j["entry_bmo"] = r.entry_bmo;
  j["entry_bmo_sum"] = r.entry_bmo_sum;
  j["chain_ok"] = r.chain_ok;
  j["lower_bound_ratio"] = r.lower_bound_ratio;
  return j;
}

ReductionReport lower_bound_reduction_check(const MatrixSpectrum2D& symbol, int trials, Backend backend,
                                            std::uint64_t seed, const TestSetFamily& family) {
  if (trials < 1) throw InvalidConfig("lower_bound_reduction_check needs trials >= 1");
  const int d = symbol.dim();
  const FieldShape scalar{symbol.depth(), 1};
  ReductionReport r;
  r.backend = backend;
  r.depth = symbol.depth();
  r.dim = d;

  const LinearOperator c = commutator_for(symbol, backend);
  r.commutator_norm = operator_norm(c).value;
  r.bmo = bmo_norm(symbol, family).openset_norm;

  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) {
      const MatrixSpectrum2D bji = symbol.entry(j, i);
      const LinearOperator cs = commutator_for(bji, backend);
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t s = trial_seed(seed, static_cast<std::uint64_t>((j * d + i) * trials + t));
        const VectorSpectrum2D f = random_field(scalar, s);
        const VectorSpectrum2D g = random_field(scalar, s + 1);
        const Complex lhs = inner(c(lift(f, d, i)), lift(g, d, j));
        const Complex rhs = inner(cs(f), g);
        r.pairing_residual = std::max(r.pairing_residual, relative_gap(lhs, rhs));
      }
      const double en = operator_norm(cs).value;
      r.entry_norms.push_back(en);
      r.max_entry_norm = std::max(r.max_entry_norm, en);

      const double eb = bmo_norm(embed_entry(bji, d, j, i), family).openset_norm;
      r.entry_bmo.push_back(eb);
      r.entry_bmo_sum += eb;
    }
  }
  r.pairing_ok = r.pairing_residual <= 1e-10;
  r.entry_inequality_ok = r.max_entry_norm <= r.commutator_norm + 1e-9;
  r.chain_ok = r.bmo <= r.entry_bmo_sum + 1e-9;
  if (r.bmo > 0.0) r.lower_bound_ratio = d * d * r.commutator_norm / r.bmo;
  return r;
}

Json to_json(const Check& c) {
  Json j;
  j["name"] = c.name;
  j["value"] = c.value;
  j["relation"] = c.relation;
  j["threshold"] = c.threshold;
  j["pass"] = c.pass;
  return j;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : suite_table()) v.push_back(name);
    v.push_back("all");
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, const ExperimentConfig& config) {
  const auto& table = suite_table();
  const bool known = name == "all" || std::any_of(table.begin(), table.end(),
                                                  [&](const auto& e) { return e.first == name; });
  if (!known) throw UnknownSpec("unknown suite '" + name + "'");
  config.validate();

  SuiteResult result;
  Json& rep = result.report;
  rep["tool"] = "lab";
  rep["suite"] = name;
  rep["timestamp"] = timestamp();
  rep["config"] = to_json(config);
  Json sections = Json::object();
  for (const auto& [suite, fn] : table) {
    if (name != "all" && name != suite) continue;
    Section sec(suite);
    Json body = fn(config, sec);
    Json out = sec.finish();
    for (auto& [k, v] : body.items()) out[k] = v;
    sections[suite] = out;
    result.failures.insert(result.failures.end(), sec.failures().begin(), sec.failures().end());
  }
  rep["sections"] = sections;
  Json fails = Json::array();
  for (const auto& f : result.failures) fails.push_back(to_json(f));
  rep["failures"] = fails;
  rep["status"] = result.passed() ? "pass" : "fail";
  return result;
}

double replay_witnesses(const Json& report) {
  if (!report.contains("config") || !report.contains("sections") || !report["sections"].contains("bmo"))
    throw InvalidConfig("report has no bmo section to replay");
  const ExperimentConfig cfg = config_from_json(report["config"]);
  const FieldShape shape = shape_of(cfg);
  const int n = shape.side();
  double worst = 0.0;
  for (const auto& w : report["sections"]["bmo"]["witnesses"]) {
    const MatrixSpectrum2D b = generate_symbol(cfg.generator, shape, w["seed"].get<std::uint64_t>());
    const Json& rep = w["report"];
    TestSet u;
    u.mask.setZero(n, n);
    for (const auto& cell : rep["witness_cells"]) {
      u.mask(cell[0].get<int>(), cell[1].get<int>()) = 1;
      ++u.cell_count;
    }
    if (u.cell_count == 0) continue;  // zero norm, nothing witnessed
    const auto [left, right] = bmo_on_set(b, u);
    const double value = rep["order"].get<std::string>() == "left" ? left : right;
    worst = std::max(worst, std::abs(value - rep["openset_norm"].get<double>()));
  }
  return worst;
}

}  // namespace haarlab
