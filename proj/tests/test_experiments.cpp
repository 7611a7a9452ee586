#include <doctest.h>

#include <cmath>
#include <set>

#include "haarlab/bmo.hpp"
#include "haarlab/experiments.hpp"
#include "haarlab/haar.hpp"
#include "haarlab/hilbert.hpp"
#include "haarlab/serialize.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace haarlab;

namespace {

int nonzero_coefficients(const MatrixSpectrum2D& b) {
  int count = 0;
  for (int sx = 0; sx < b.side(); ++sx)
    for (int sy = 0; sy < b.side(); ++sy) count += CMatrix(b.at(sx, sy)).norm() > 0.0;
  return count;
}

using Array = Eigen::MatrixXcd;

Array shift_rows(const Array& g, int depth) {
  Array o(g.rows(), g.cols());
  for (Eigen::Index y = 0; y < g.cols(); ++y) o.col(y) = oracle::shift_line(g.col(y), depth);
  return o;
}

Array shift_cols(const Array& g, int depth) {
  Array o(g.rows(), g.cols());
  for (Eigen::Index x = 0; x < g.rows(); ++x) o.row(x) = oracle::shift_line(g.row(x).transpose(), depth).transpose();
  return o;
}

// Scalar [[M_b, T1], T2] as a dense matrix on n^2 cell values.
template <class T1, class T2>
Eigen::MatrixXcd scalar_commutator_matrix(const Array& b, T1 t1, T2 t2) {
  const Eigen::Index n = b.rows(), m = n * n;
  Eigen::MatrixXcd out(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Array e = Array::Zero(n, n);
    e(k / n, k % n) = 1.0;
    const Array c = b.cwiseProduct(t1(t2(e))) - t1(b.cwiseProduct(t2(e))) - t2(b.cwiseProduct(t1(e))) +
                    t2(t1(b.cwiseProduct(e)));
    for (Eigen::Index j = 0; j < m; ++j) out(j, k) = c(j / n, j % n);
  }
  return out;
}

Array scalar_samples(const MatrixSpectrum2D& b) {
  const SampledSymbol2D s = synthesize2d(b);
  Array out(s.side(), s.side());
  for (int x = 0; x < s.side(); ++x)
    for (int y = 0; y < s.side(); ++y) out(x, y) = s.at(x, y)(0, 0);
  return out;
}

// sqrt(max_U |U|^{-1} sum_{R in U} |b(R)|^2) over the family, computed per cell mask.
double scalar_bmo(const MatrixSpectrum2D& b, const TestSetFamily& fam) {
  const int N = b.depth(), n = b.side();
  double best = 0.0;
  for (const auto& u : fam.members()) {
    double s = 0.0;
    for (int sx = 1; sx < n; ++sx)
      for (int sy = 1; sy < n; ++sy) {
        const Eigen::VectorXd px = oracle::slot_profile(sx, N), py = oracle::slot_profile(sy, N);
        bool inside = true;
        for (int x = 0; x < n && inside; ++x)
          for (int y = 0; y < n && inside; ++y)
            if (px(x) != 0.0 && py(y) != 0.0 && !u.mask(x, y)) inside = false;
        if (inside) s += std::norm(b.at(sx, sy)(0, 0));
      }
    best = std::max(best, s * n * n / u.cell_count);
  }
  return std::sqrt(best);
}

Json without_timestamp(Json j) {
  j.erase("timestamp");
  return j;
}

}  // namespace

TEST_CASE("generator names") {
  CHECK(GeneratorSpec::parse("gaussian").kind == GeneratorKind::kGaussian);
  CHECK(GeneratorSpec::parse("random-gaussian-coefficients").kind == GeneratorKind::kGaussian);
  CHECK(GeneratorSpec::parse("rank-one-coefficients").kind == GeneratorKind::kRankOne);
  const GeneratorSpec e = GeneratorSpec::parse("scalar-embedded(1,2)");
  CHECK(e.kind == GeneratorKind::kScalarEmbedded);
  CHECK(e.row == 0);
  CHECK(e.col == 1);
  CHECK(GeneratorSpec::parse(e.name()).col == 1);
  CHECK_THROWS_AS((GeneratorSpec::parse("uniform")), UnknownSpec);
  CHECK_THROWS_AS((GeneratorSpec::parse("scalar-embedded(0,1)")), UnknownSpec);
  CHECK_THROWS_AS((generate_symbol("nope", {3, 2}, 1)), UnknownSpec);
  CHECK_THROWS_AS((generate_symbol("scalar-embedded(3,1)", {3, 2}, 1)), DimensionMismatch);
}

TEST_CASE("generators") {
  const FieldShape shape{3, 2};
  for (const char* g : {"gaussian", "single-rectangle", "scalar-embedded(2,1)", "diagonal-scalars", "rank-one"}) {
    INFO(g);
    const MatrixSpectrum2D b = generate_symbol(g, shape, 5);
    CHECK(is_cancellative_up_to(b, 2));
    CHECK(b.data().norm() > 0.0);
    CHECK(support::rel(generate_symbol(g, shape, 5), b) == 0.0);
  }
  CHECK(nonzero_coefficients(generate_symbol("single-rectangle", shape, 3)) == 1);
  CHECK(support::rel(generate_symbol("gaussian", shape, 1), generate_symbol("gaussian", shape, 2)) > 0.1);

  const MatrixSpectrum2D d = generate_symbol("diagonal-scalars", shape, 4);
  const MatrixSpectrum2D r1 = generate_symbol("rank-one", shape, 4);
  for (int sx = 1; sx < 8; ++sx)
    for (int sy = 1; sy < 8; ++sy) {
      CHECK(std::abs(d.at(sx, sy)(0, 1)) + std::abs(d.at(sx, sy)(1, 0)) == 0.0);
      CHECK(std::abs(CMatrix(r1.at(sx, sy)).determinant()) < 1e-12);
    }

  const DyadicRectangle r0{{1, 1}, {0, 0}};
  CMatrix a(2, 2);
  a << 1, 2, 3, 4;
  const MatrixSpectrum2D s = single_rectangle_symbol(shape, r0, a);
  CHECK(nonzero_coefficients(s) == 1);
  CHECK(CMatrix(s.at(r0.ix.heap(), r0.iy.heap())) == a);
}

TEST_CASE("scalar-embedded coefficients are rank one") {
  // Entry (1,2): B(R) B(R)^* = |b(R)|^2 E_11.
  const MatrixSpectrum2D b = generate_symbol("scalar-embedded(1,2)", {3, 3}, 9);
  double gap = 0.0;
  int nonzero = 0;
  for (int sx = 1; sx < 8; ++sx)
    for (int sy = 1; sy < 8; ++sy) {
      const CMatrix c = b.at(sx, sy);
      CMatrix want = CMatrix::Zero(3, 3);
      want(0, 0) = std::norm(c(0, 1));
      gap = std::max(gap, (c * c.adjoint() - want).norm());
      nonzero += std::abs(c(0, 1)) > 0.0;
    }
  CHECK(gap < 1e-14);
  CHECK(nonzero == 49);
}

TEST_CASE("random fields") {
  const FieldShape shape{3, 2};
  CHECK(support::rel(random_field(shape, 1), random_field(shape, 1)) == 0.0);
  CHECK(is_cancellative_up_to(random_field(shape, 2, 1), 1));
  CHECK(std::abs(random_field(shape, 3).at(0, 0)(0)) > 0.0);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(ExperimentConfig{}.validate());
  auto bad = [](auto edit) {
    ExperimentConfig c;
    edit(c);
    CHECK_THROWS_AS((c.validate()), InvalidConfig);
  };
  bad([](ExperimentConfig& c) { c.trials = 0; });
  bad([](ExperimentConfig& c) { c.depth = 0; });
  bad([](ExperimentConfig& c) { c.depth = 11; });
  bad([](ExperimentConfig& c) { c.dim = 9; });
  bad([](ExperimentConfig& c) { c.tolerance = 0.0; });
  bad([](ExperimentConfig& c) { c.generator = "uniform"; });
  CHECK(backend_from_string("hilbert") == Backend::kHilbert);
  CHECK(to_string(Backend::kShift) == "shift");
  CHECK_THROWS_AS((backend_from_string("fourier")), InvalidConfig);
}

TEST_CASE("config json") {
  ExperimentConfig c;
  c.depth = 4;
  c.dim = 3;
  c.trials = 7;
  c.backend = Backend::kHilbert;
  c.generator = "rank-one";
  c.seed = 123456789012345ull;
  c.out = "x.json";
  const ExperimentConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));

  Json partial;
  partial["dim"] = 2;
  const ExperimentConfig merged = config_from_json(partial, c);
  CHECK(merged.dim == 2);
  CHECK(merged.depth == 4);
  CHECK(merged.backend == Backend::kHilbert);
}

TEST_CASE("trial seeds") {
  std::set<std::uint64_t> seen;
  for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(trial_seed(42, t));
  CHECK(seen.size() == 1000);
  CHECK(trial_seed(42, 3) == trial_seed(42, 3));
  CHECK(trial_seed(42, 3) != trial_seed(43, 3));
}

TEST_CASE("degenerate symbols") {
  const FieldShape shape{3, 2};
  const TestSetFamily fam = TestSetFamily::standard(3, 1);
  for (Backend backend : {Backend::kShift, Backend::kHilbert}) {
    MatrixSpectrum2D b(shape);
    b.at(0, 0) << 1, 2, 3, 4;
    const SandwichRecord r = sandwich_record(b, fam, backend);
    CHECK(r.degenerate);
    CHECK(r.bmo == 0.0);
    CHECK(r.norm <= 1e-10);
    CHECK_FALSE(r.ratio.has_value());
    const Json j = to_json(r);
    CHECK(j.dump().find("nan") == std::string::npos);

    const SandwichSummary s = summarize({r});
    CHECK(s.nondegenerate == 0);
    CHECK(s.spread == 0.0);
    CHECK(s.finite);
  }
}

TEST_CASE("sandwich batch") {
  ExperimentConfig c;
  c.depth = 3;
  c.dim = 1;
  c.trials = 6;
  c.seed = 5;
  for (Backend backend : {Backend::kShift, Backend::kHilbert}) {
    c.backend = backend;
    const auto records = sandwich_experiment(c);
    REQUIRE(records.size() == 6);
    const SandwichSummary s = summarize(records);
    CHECK(s.nondegenerate == 6);
    CHECK(s.finite);
    CHECK(s.min_ratio > 0.0);
    for (const auto& r : records) {
      REQUIRE(r.ratio.has_value());
      CHECK(*r.ratio >= s.min_ratio);
      CHECK(*r.ratio <= s.max_ratio);
      CHECK(r.seed == trial_seed(c.seed, r.trial));
      CHECK(r.entry_norms.size() == 1);
      CHECK(r.entry_norms[0] == doctest::Approx(r.norm).epsilon(1e-8));
    }
    CHECK(s.spread == doctest::Approx(s.max_ratio / s.min_ratio));
  }
}

TEST_CASE("scalar consistency at d = 1") {
  const int depth = 3;
  const MatrixSpectrum2D b = generate_symbol("gaussian", {depth, 1}, 17);
  const TestSetFamily fam = TestSetFamily::standard(depth, 2);
  const Array bs = scalar_samples(b);

  auto h1 = [](const Array& g) {
    Array o(g.rows(), g.cols());
    for (Eigen::Index y = 0; y < g.cols(); ++y) o.col(y) = oracle::dft_hilbert(g.col(y));
    return o;
  };
  auto h2 = [](const Array& g) {
    Array o(g.rows(), g.cols());
    for (Eigen::Index x = 0; x < g.rows(); ++x) o.row(x) = oracle::dft_hilbert(g.row(x).transpose()).transpose();
    return o;
  };
  auto s1 = [](const Array& g) { return shift_rows(g, depth); };
  auto s2 = [](const Array& g) { return shift_cols(g, depth); };

  const double shift_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(scalar_commutator_matrix(bs, s1, s2)).singularValues()(0);
  const double hilbert_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(scalar_commutator_matrix(bs, h1, h2)).singularValues()(0);
  const double bmo = scalar_bmo(b, fam);

  const SandwichRecord rs = sandwich_record(b, fam, Backend::kShift);
  const SandwichRecord rh = sandwich_record(b, fam, Backend::kHilbert);
  CHECK(std::abs(rs.bmo - bmo) <= 1e-12 * bmo);
  CHECK(std::abs(rh.bmo - bmo) <= 1e-12 * bmo);
  CHECK(std::abs(rs.norm - shift_norm) <= 1e-12 * shift_norm);
  CHECK(std::abs(rh.norm - hilbert_norm) <= 1e-12 * hilbert_norm);
}

TEST_CASE("lower-bound reduction") {
  const TestSetFamily fam = TestSetFamily::standard(3, 3);
  SUBCASE("diagonal with equal entries") {
    const MatrixSpectrum2D s = generate_symbol("gaussian", {3, 1}, 21);
    MatrixSpectrum2D b({3, 2});
    b += embed_entry(s, 2, 0, 0);
    b += embed_entry(s, 2, 1, 1);
    for (Backend backend : {Backend::kShift, Backend::kHilbert}) {
      const ReductionReport r = lower_bound_reduction_check(b, 3, backend, 1, fam);
      CHECK(r.passed());
      const double scalar = sandwich_record(s, fam, backend).norm;
      REQUIRE(r.entry_norms.size() == 4);
      CHECK(r.entry_norms[0] == doctest::Approx(scalar).epsilon(1e-8));
      CHECK(r.entry_norms[3] == doctest::Approx(scalar).epsilon(1e-8));
      CHECK(r.entry_norms[1] <= 1e-12);
      CHECK(r.entry_norms[2] <= 1e-12);
      CHECK(r.commutator_norm == doctest::Approx(r.max_entry_norm).epsilon(1e-8));
    }
  }
  SUBCASE("single entry") {
    const MatrixSpectrum2D s = generate_symbol("gaussian", {3, 1}, 22);
    const MatrixSpectrum2D b = embed_entry(s, 2, 1, 0);
    const ReductionReport r = lower_bound_reduction_check(b, 3, Backend::kShift, 2, fam);
    const double scalar = bmo_norm(s, fam).openset_norm;
    CHECK(r.passed());
    CHECK(r.bmo == doctest::Approx(scalar).epsilon(1e-12));
    CHECK(r.entry_bmo_sum == doctest::Approx(scalar).epsilon(1e-12));
  }
  SUBCASE("random d = 2") {
    for (Backend backend : {Backend::kShift, Backend::kHilbert})
      for (int t = 0; t < 2; ++t) {
        const ReductionReport r =
            lower_bound_reduction_check(generate_symbol("gaussian", {3, 2}, 30 + t), 3, backend, 4 + t, fam);
        CHECK(r.pairing_residual <= 1e-10);
        CHECK(r.pairing_ok);
        CHECK(r.entry_inequality_ok);
        CHECK(r.chain_ok);
        CHECK(r.bmo <= r.entry_bmo_sum + 1e-9);
        CHECK(r.max_entry_norm <= r.commutator_norm + 1e-9);
        CHECK(r.lower_bound_ratio > 0.0);
      }
  }
}

TEST_CASE("suites") {
  ExperimentConfig c;
  c.depth = 3;
  c.dim = 1;
  c.trials = 3;
  const SuiteResult a = run_suite("identities", c);
  CHECK(a.passed());
  CHECK(a.report["status"] == "pass");
  CHECK(a.report["sections"].contains("identities"));
  CHECK(a.report["sections"].size() == 1);
  CHECK(without_timestamp(run_suite("identities", c).report) == without_timestamp(a.report));

  CHECK_THROWS_AS((run_suite("everything", c)), UnknownSpec);
  c.trials = 0;
  CHECK_THROWS_AS((run_suite("sandwich", c)), InvalidConfig);

  ExperimentConfig small;
  small.depth = 2;
  small.trials = 2;
  const SuiteResult all = run_suite("all", small);
  CHECK(all.passed());
  for (const auto& name : suite_names())
    if (name != "all") CHECK(all.report["sections"].contains(name));
  CHECK(replay_witnesses(all.report) <= 1e-12);
}
