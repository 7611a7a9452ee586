#include <doctest.h>

#include <cmath>
#include <sstream>

#include "haarlab/haar.hpp"
#include "haarlab/serialize.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace haarlab;

TEST_CASE("grid config limits") {
  CHECK_NOTHROW(GridConfig{1, 1}.validate());
  CHECK_NOTHROW(GridConfig{10, 8}.validate());
  CHECK_THROWS_AS((GridConfig{0, 1}.validate()), InvalidConfig);
  CHECK_THROWS_AS((GridConfig{11, 1}.validate()), InvalidConfig);
  CHECK_THROWS_AS((GridConfig{3, 0}.validate()), InvalidConfig);
  CHECK_THROWS_AS((GridConfig{3, 9}.validate()), InvalidConfig);
}

TEST_CASE("children and parents") {
  const auto [a, b] = children({0, 0}, 3);
  CHECK(a == DyadicInterval{1, 0});
  CHECK(b == DyadicInterval{1, 1});
  const auto [c, d] = children({1, 1}, 3);
  CHECK(c == DyadicInterval{2, 2});
  CHECK(d == DyadicInterval{2, 3});
  CHECK(c.measure() == doctest::Approx(0.25));
  CHECK_THROWS_AS((children({3, 0}, 3)), LevelOverflow);
  CHECK_THROWS_AS((parent({0, 0})), RootHasNoParent);

  for (int level = 0; level < 4; ++level)
    for (int k = 0; k < (1 << level); ++k) {
      const DyadicInterval i{level, k};
      const auto [l, r] = children(i, 4);
      CHECK(parent(l) == i);
      CHECK(parent(r) == i);
      CHECK(l.measure() == doctest::Approx(i.measure() / 2));
    }
}

TEST_CASE("haar sign") {
  CHECK(haar_sign({2, 2}) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(haar_sign({2, 3}) == doctest::Approx(-1 / std::sqrt(2.0)));
  CHECK_THROWS_AS((haar_sign({0, 0})), RootHasNoParent);
}

TEST_CASE("rectangle containment and measure") {
  const DyadicRectangle big{{1, 0}, {0, 0}};
  const DyadicRectangle small{{2, 1}, {3, 5}};
  CHECK(big.contains(small));
  CHECK_FALSE(small.contains(big));
  CHECK(small.measure() == doctest::Approx(0.25 * 0.125));
  CHECK_FALSE(big.contains(DyadicRectangle{{2, 2}, {3, 5}}));
}

TEST_CASE("constant field has only the global mean") {
  const FieldShape shape{3, 2};
  SampledField2D f(shape);
  CVector v(2);
  v << Complex(1.5, -0.5), Complex(-2.0, 0.25);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) f.at(x, y) = v;
  const VectorSpectrum2D s = analyze2d(f);
  CHECK((s.at(0, 0) - v).norm() < 1e-14);
  double rest = s.data().squaredNorm() - s.at(0, 0).squaredNorm();
  CHECK(rest < 1e-26);
}

TEST_CASE("sampled Haar function has a unit coefficient") {
  const FieldShape shape{3, 2};
  const HaarIndex2D idx{{{1, 1}, {2, 0}}};
  const SampledField2D h = evaluate_basis(idx, 3);
  SampledField2D f(shape);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) f.at(x, y)(0) = h.at(x, y)(0);
  const VectorSpectrum2D s = analyze2d(f);
  const auto [sx, sy] = basis_slots(idx, 3);
  CHECK(std::abs(s.at(sx, sy)(0) - 1.0) < 1e-14);
  CHECK(s.data().squaredNorm() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("analysis agrees with direct summation") {
  for (int depth : {1, 2, 3}) {
    const SampledField2D f = support::random_samples({depth, 2}, 10 + depth);
    CHECK(support::rel(analyze2d(f), oracle::analyze(f)) < 1e-13);
    const VectorSpectrum2D s = analyze2d(f);
    CHECK(support::rel(synthesize2d(s), oracle::synthesize(s)) < 1e-13);
  }
}

TEST_CASE("round trip and Parseval") {
  for (int depth : {2, 3, 4})
    for (int dim : {1, 2, 3})
      for (int t = 0; t < 100; ++t) {
        const SampledField2D f = support::random_samples({depth, dim}, 1000 * depth + 100 * dim + t);
        const VectorSpectrum2D s = analyze2d(f);
        REQUIRE(support::rel(synthesize2d(s), f) <= 1e-12);
        REQUIRE(std::abs(norm(s) - norm(f)) / norm(f) <= 1e-12);
        REQUIRE(support::rel(analyze2d(synthesize2d(s)), s) <= 1e-12);
      }
}

TEST_CASE("matrix symbols round trip") {
  const SampledSymbol2D b = support::random_symbol_samples({3, 3}, 5);
  const SampledSymbol2D back = synthesize2d(analyze2d(b));
  CHECK(support::rel(back, b) < 1e-12);
}

TEST_CASE("evaluate_basis") {
  const SampledField2D one = evaluate_basis(HaarIndex2D{{{0, 0}, {0, 0}}, HaarKind::kAverage, HaarKind::kAverage}, 3);
  for (int x = 0; x < 8; ++x)
    for (int y = 0; y < 8; ++y) CHECK(one.at(x, y)(0) == Complex(1.0));

  const SampledField2D q = evaluate_basis(HaarIndex2D{{{1, 0}, {1, 1}}}, 2);
  // h_{[0,1/2)}(x) h_{[1/2,1)}(y): +-2 on the four quarter cells of [0,1/2) x [1/2,1).
  CHECK(std::abs(q.at(0, 2)(0) - 2.0) < 1e-14);
  CHECK(std::abs(q.at(0, 3)(0) + 2.0) < 1e-14);
  CHECK(std::abs(q.at(1, 2)(0) + 2.0) < 1e-14);
  CHECK(std::abs(q.at(1, 3)(0) - 2.0) < 1e-14);
  CHECK(std::abs(q.at(2, 2)(0)) < 1e-14);
  CHECK(norm(q) == doctest::Approx(1.0));

  CHECK_THROWS_AS((evaluate_basis(HaarIndex2D{{{3, 0}, {0, 0}}}, 3)), NotRepresentable);
  CHECK_THROWS_AS((evaluate_basis(HaarIndex2D{{{1, 0}, {0, 0}}, HaarKind::kAverage}, 3)), NotRepresentable);
}

TEST_CASE("basis is orthonormal up to depth 4") {
  for (int depth = 1; depth <= 4; ++depth) {
    const int n = 1 << depth;
    Eigen::MatrixXd g(n * n, n * n);
    int col = 0;
    for (int sx = 0; sx < n; ++sx)
      for (int sy = 0; sy < n; ++sy) {
        const SampledField2D e = evaluate_basis(basis_index(sx, sy), depth);
        g.col(col++) = e.data().real();
      }
    const Eigen::MatrixXd gram = g.transpose() * g / static_cast<double>(n * n);
    CHECK((gram - Eigen::MatrixXd::Identity(n * n, n * n)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("evaluate_basis matches the direct profiles") {
  for (int sx = 0; sx < 8; ++sx)
    for (int sy = 0; sy < 8; ++sy) {
      const SampledField2D e = evaluate_basis(basis_index(sx, sy), 3);
      const Eigen::VectorXd px = oracle::slot_profile(sx, 3), py = oracle::slot_profile(sy, 3);
      double gap = 0.0;
      for (int x = 0; x < 8; ++x)
        for (int y = 0; y < 8; ++y) gap = std::max(gap, std::abs(e.at(x, y)(0) - px(x) * py(y)));
      CHECK(gap < 1e-14);
    }
}

TEST_CASE("shape mismatch is reported") {
  const VectorSpectrum2D a({3, 1}), b({3, 2});
  CHECK_THROWS_AS((inner(a, b)), DimensionMismatch);
  CHECK_THROWS_AS((VectorSpectrum2D({2, 1}, CVector::Zero(3))), DimensionMismatch);
}

TEST_CASE("spectrum json round trip") {
  const VectorSpectrum2D s = analyze2d(support::random_samples({2, 2}, 3));
  const Json j = to_json(s);
  CHECK(j["depth"] == 2);
  CHECK(j["dim"] == 2);
  const Json& first = j["coefficients"][0];
  for (const char* key : {"kind", "jx", "kx", "jy", "ky", "matrix"}) CHECK(first.contains(key));
  CHECK(support::rel(vector_spectrum_from_json(j), s) < 1e-15);

  MatrixSpectrum2D m({2, 2});
  m.at(1, 2) << Complex(1, 2), Complex(3, 4), Complex(5, 6), Complex(7, 8);
  const Json mj = to_json(m);
  CHECK(mj["coefficients"].size() == 1);
  CHECK(mj["coefficients"][0]["matrix"][1][0] == 3.0);
  CHECK(support::rel(matrix_spectrum_from_json(mj), m) == 0.0);
}

TEST_CASE("csv export") {
  CMatrix m(1, 2);
  m << Complex(1, -1), Complex(0.5, 0);
  std::ostringstream os;
  write_complex_csv(os, m);
  CHECK(os.str() == "1,-1,0.5,0\n");
}
