#include "haarlab/bmo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include <Eigen/Eigenvalues>

#include "haarlab/haar.hpp"

namespace haarlab {
namespace {

// Inclusive-exclusive 2D prefix sums over an n x n array.
class Prefix2D {
 public:
  template <class M>
  explicit Prefix2D(const M& m) : s_(Eigen::MatrixXd::Zero(m.rows() + 1, m.cols() + 1)) {
    for (Eigen::Index x = 0; x < m.rows(); ++x)
      for (Eigen::Index y = 0; y < m.cols(); ++y)
        s_(x + 1, y + 1) = static_cast<double>(m(x, y)) + s_(x, y + 1) + s_(x + 1, y) - s_(x, y);
  }
  // Sum over [x0, x1) x [y0, y1).
  double sum(int x0, int x1, int y0, int y1) const {
    return s_(x1, y1) - s_(x0, y1) - s_(x1, y0) + s_(x0, y0);
  }

 private:
  Eigen::MatrixXd s_;
};

struct CellBox {
  int x0, x1, y0, y1;
  int area() const { return (x1 - x0) * (y1 - y0); }
};

CellBox box_of(const DyadicRectangle& r, int depth) {
  const auto [x0, x1] = r.ix.cells(depth);
  const auto [y0, y1] = r.iy.cells(depth);
  return {x0, x1, y0, y1};
}

CellBox box_of_slots(int sx, int sy, int depth) {
  return box_of({DyadicInterval::from_heap(sx), DyadicInterval::from_heap(sy)}, depth);
}

// A cancellative coefficient with its precomputed products.
struct CoefTerm {
  CellBox box;
  CMatrix left;   // B B*
  CMatrix right;  // B* B
  double frobenius2;
};

std::vector<CoefTerm> coefficient_terms(const MatrixSpectrum2D& b) {
  std::vector<CoefTerm> terms;
  const int n = b.side();
  for (int sx = 1; sx < n; ++sx) {
    for (int sy = 1; sy < n; ++sy) {
      const CMatrix m = b.at(sx, sy);
      const double f2 = m.squaredNorm();
      if (f2 == 0.0) continue;
      terms.push_back({box_of_slots(sx, sy, b.depth()), m * m.adjoint(), m.adjoint() * m, f2});
    }
  }
  return terms;
}

double top_eigenvalue(const CMatrix& m) {
  if (m.rows() == 1) return m(0, 0).real();
  const CMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

struct SetValue {
  double left = 0.0;
  double right = 0.0;
  double trace = 0.0;
};

SetValue evaluate_set(const std::vector<CoefTerm>& terms, int dim, const TestSet& u) {
  const Prefix2D prefix(u.mask);
  CMatrix left = CMatrix::Zero(dim, dim);
  CMatrix right = CMatrix::Zero(dim, dim);
  double frob = 0.0;
  for (const auto& t : terms) {
    const auto& bx = t.box;
    if (prefix.sum(bx.x0, bx.x1, bx.y0, bx.y1) != bx.area()) continue;
    left += t.left;
    right += t.right;
    frob += t.frobenius2;
  }
  const double measure = u.measure();
  return {std::sqrt(std::max(0.0, top_eigenvalue(left) / measure)),
          std::sqrt(std::max(0.0, top_eigenvalue(right) / measure)), std::sqrt(frob / measure)};
}

double noncancellative_norm(const MatrixSpectrum2D& b) {
  double s = 0.0;
  const int n = b.side();
  const int block = b.dim() * b.dim();
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (x == 0 || y == 0) s += b.data().segment(b.offset(x, y), block).squaredNorm();
  return std::sqrt(s);
}

// Dyadic averages of g at levels (jx, jy), evaluated per cell, combined by max.
ScalarField dyadic_max(const ScalarField& g, bool use_x, bool use_y) {
  const int n = static_cast<int>(g.rows());
  const int depth = std::bit_width(static_cast<unsigned>(n)) - 1;
  const Prefix2D prefix(g.cwiseAbs());
  ScalarField out = ScalarField::Zero(n, n);
  for (int jx = use_x ? 0 : depth; jx <= depth; ++jx) {
    const int wx = n >> jx;
    for (int jy = use_y ? 0 : depth; jy <= depth; ++jy) {
      const int wy = n >> jy;
      for (int x = 0; x < n; ++x) {
        const int x0 = (x / wx) * wx;
        for (int y = 0; y < n; ++y) {
          const int y0 = (y / wy) * wy;
          const double avg = prefix.sum(x0, x0 + wx, y0, y0 + wy) / (wx * wy);
          out(x, y) = std::max(out(x, y), avg);
        }
      }
    }
  }
  return out;
}

}  // namespace

TestSet TestSet::from_rectangle(const DyadicRectangle& r, int depth) {
  const int n = 1 << depth;
  TestSet t;
  t.mask.setZero(n, n);
  const CellBox b = box_of(r, depth);
  t.mask.block(b.x0, b.y0, b.x1 - b.x0, b.y1 - b.y0).setOnes();
  t.cell_count = b.area();
  return t;
}

double TestSet::measure() const {
  return static_cast<double>(cell_count) / static_cast<double>(mask.size());
}

std::vector<std::pair<int, int>> TestSet::cells() const {
  std::vector<std::pair<int, int>> out;
  for (Eigen::Index x = 0; x < mask.rows(); ++x)
    for (Eigen::Index y = 0; y < mask.cols(); ++y)
      if (mask(x, y)) out.emplace_back(static_cast<int>(x), static_cast<int>(y));
  return out;
}

void TestSetFamily::add(TestSet set) {
  if (set.cell_count <= 0) throw PreconditionViolated("test sets must be nonempty");
  members_.push_back(std::move(set));
}

TestSetFamily& TestSetFamily::append(const TestSetFamily& other) {
  if (other.depth_ != depth_) throw DimensionMismatch("test set families at different depths");
  members_.insert(members_.end(), other.members_.begin(), other.members_.end());
  if (other.kind_ != kind_) kind_ = FamilyKind::kMixed;
  return *this;
}

TestSetFamily TestSetFamily::rectangles(int depth) {
  TestSetFamily fam(depth, FamilyKind::kRectangles);
  for (int jx = 0; jx <= depth; ++jx)
    for (int kx = 0; kx < (1 << jx); ++kx)
      for (int jy = 0; jy <= depth; ++jy)
        for (int ky = 0; ky < (1 << jy); ++ky)
          fam.add(TestSet::from_rectangle({{jx, kx}, {jy, ky}}, depth));
  return fam;
}

TestSetFamily TestSetFamily::full_square(int depth) {
  TestSetFamily fam(depth, FamilyKind::kFullSquare);
  fam.add(TestSet::from_rectangle({{0, 0}, {0, 0}}, depth));
  return fam;
}

TestSetFamily TestSetFamily::random_unions(int depth, int m, int trials, std::uint64_t seed) {
  if (m < 1 || trials < 1) throw InvalidConfig("random unions need m >= 1 and trials >= 1");
  TestSetFamily fam(depth, FamilyKind::kRandomUnions);
  const int n = 1 << depth;
  std::vector<CellBox> pool;
  for (int sx = 1; sx < n; ++sx)
    for (int sy = 1; sy < n; ++sy) pool.push_back(box_of_slots(sx, sy, depth));
  const int p = static_cast<int>(pool.size());
  if (p == 0) return fam;

  auto make = [&](const std::vector<int>& chosen) {
    TestSet t;
    t.mask.setZero(n, n);
    for (int i : chosen) {
      const CellBox& b = pool[i];
      t.mask.block(b.x0, b.y0, b.x1 - b.x0, b.y1 - b.y0).setOnes();
    }
    t.cell_count = static_cast<int>(t.mask.cast<int>().sum());
    fam.add(std::move(t));
  };

  // Count unions of 1..m pool members; enumerate when the budget covers them.
  double count = 0.0, binom = 1.0;
  for (int k = 1; k <= std::min(m, p); ++k) {
    binom = binom * (p - k + 1) / k;
    count += binom;
  }
  if (count <= trials && p <= 24) {
    for (std::uint32_t bits = 1; bits < (1u << p); ++bits) {
      if (std::popcount(bits) > m) continue;
      std::vector<int> chosen;
      for (int i = 0; i < p; ++i)
        if (bits & (1u << i)) chosen.push_back(i);
      make(chosen);
    }
    return fam;
  }
  std::mt19937_64 rng(seed);
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::uniform_int_distribution<int> size_dist(1, std::min(m, p));
  for (int t = 0; t < trials; ++t) {
    const int k = size_dist(rng);
    std::shuffle(order.begin(), order.end(), rng);
    make(std::vector<int>(order.begin(), order.begin() + k));
  }
  return fam;
}

TestSetFamily TestSetFamily::exhaustive_cells(int depth) {
  if (depth > 2) throw InvalidConfig("exhaustive cell family is limited to depth <= 2");
  const int n = 1 << depth;
  const int cells = n * n;
  TestSetFamily fam(depth, FamilyKind::kExhaustiveCells);
  for (std::uint32_t bits = 1; bits < (1u << cells); ++bits) {
    TestSet t;
    t.mask.setZero(n, n);
    for (int c = 0; c < cells; ++c)
      if (bits & (1u << c)) t.mask(c / n, c % n) = 1;
    t.cell_count = std::popcount(bits);
    fam.add(std::move(t));
  }
  return fam;
}

TestSetFamily TestSetFamily::standard(int depth, std::uint64_t seed) {
  TestSetFamily fam = rectangles(depth);
  fam.append(full_square(depth));
  fam.append(random_unions(depth, 8, 512, seed));
  return fam;
}

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::kRectangles: return "rectangles";
    case FamilyKind::kFullSquare: return "full-square";
    case FamilyKind::kRandomUnions: return "random-unions";
    case FamilyKind::kExhaustiveCells: return "exhaustive-cells";
    case FamilyKind::kMixed: return "mixed";
  }
  return "?";
}

nlohmann::ordered_json to_json(const BmoReport& r) {
  nlohmann::ordered_json j;
  j["rect_norm"] = r.rect_norm;
  j["openset_norm"] = r.openset_norm;
  j["order"] = r.order;
  j["trace_quantity"] = r.trace_quantity;
  auto cells = nlohmann::ordered_json::array();
  for (const auto& [x, y] : r.witness_cells) cells.push_back({x, y});
  j["witness_cells"] = std::move(cells);
  j["ignored_norm"] = r.ignored_norm;
  return j;
}

std::pair<double, double> bmo_on_set(const MatrixSpectrum2D& b, const TestSet& u) {
  const SetValue v = evaluate_set(coefficient_terms(b), b.dim(), u);
  return {v.left, v.right};
}

BmoReport bmo_norm(const MatrixSpectrum2D& b, const TestSetFamily& family) {
  if (family.size() == 0) throw EmptyFamily("bmo_norm needs a nonempty test-set family");
  if (family.depth() != b.depth()) throw DimensionMismatch("family depth differs from symbol depth");
  const auto terms = coefficient_terms(b);
  BmoReport report;
  report.ignored_norm = noncancellative_norm(b);
  const TestSet* witness = &family.members().front();
  for (const auto& u : family.members()) {
    const SetValue v = evaluate_set(terms, b.dim(), u);
    report.trace_quantity = std::max(report.trace_quantity, v.trace);
    if (v.left > report.openset_norm) {
      report.openset_norm = v.left;
      report.order = "left";
      witness = &u;
    }
    if (v.right > report.openset_norm) {
      report.openset_norm = v.right;
      report.order = "right";
      witness = &u;
    }
  }
  report.witness_cells = witness->cells();
  const TestSetFamily rects = TestSetFamily::rectangles(b.depth());
  for (const auto& u : rects.members()) {
    const SetValue v = evaluate_set(terms, b.dim(), u);
    report.rect_norm = std::max({report.rect_norm, v.left, v.right});
  }
  return report;
}

TraceBound trace_bound_check(const MatrixSpectrum2D& b, const TestSetFamily& family) {
  const BmoReport r = bmo_norm(b, family);
  TraceBound t;
  t.lhs = r.trace_quantity;
  t.bound = b.dim() * r.openset_norm;
  t.holds = t.lhs <= (1.0 + 1e-9) * t.bound;
  return t;
}

ScalarField carleson_weights(const MatrixSpectrum2D& b, CarlesonWeight kind) {
  const int n = b.side();
  ScalarField a = ScalarField::Zero(n, n);
  for (int sx = 1; sx < n; ++sx) {
    for (int sy = 1; sy < n; ++sy) {
      const CMatrix m = b.at(sx, sy);
      if (kind == CarlesonWeight::kFrobenius) {
        a(sx, sy) = m.squaredNorm();
      } else {
        const double s = m.jacobiSvd().singularValues()(0);
        a(sx, sy) = s * s;
      }
    }
  }
  return a;
}

nlohmann::ordered_json to_json(const CarlesonReport& r) {
  nlohmann::ordered_json j;
  j["C1_emp"] = r.c1_empirical;
  j["C2"] = r.c2;
  j["C1_exact"] = r.c1_exact;
  j["ratio"] = r.ratio;
  return j;
}

CarlesonReport carleson_check(const ScalarField& weights, const TestSetFamily& family, int trials,
                              std::uint64_t seed) {
  const int n = static_cast<int>(weights.rows());
  const int depth = family.depth();
  if (n != (1 << depth)) throw DimensionMismatch("weights and family depth disagree");
  if (family.size() == 0) throw EmptyFamily("carleson_check needs a nonempty family");
  if ((weights.array() < 0.0).any()) throw PreconditionViolated("Carleson weights must be nonnegative");

  struct Weighted {
    CellBox box;
    double a;
  };
  std::vector<Weighted> rects;
  for (int sx = 1; sx < n; ++sx)
    for (int sy = 1; sy < n; ++sy)
      if (weights(sx, sy) > 0.0) rects.push_back({box_of_slots(sx, sy, depth), weights(sx, sy)});

  CarlesonReport report;
  const TestSet* witness = &family.members().front();
  for (const auto& u : family.members()) {
    const Prefix2D prefix(u.mask);
    double s = 0.0;
    for (const auto& r : rects)
      if (prefix.sum(r.box.x0, r.box.x1, r.box.y0, r.box.y1) == r.box.area()) s += r.a;
    if (s / u.measure() > report.c2) {
      report.c2 = s / u.measure();
      witness = &u;
    }
  }

  const double cell = 1.0 / (static_cast<double>(n) * n);
  auto embedding = [&](const ScalarField& f) {
    const double f2 = f.squaredNorm() * cell;
    if (f2 == 0.0) return 0.0;
    const Prefix2D prefix(f);
    double s = 0.0;
    for (const auto& r : rects) {
      const double avg = prefix.sum(r.box.x0, r.box.x1, r.box.y0, r.box.y1) / r.box.area();
      s += r.a * avg * avg;
    }
    return s / f2;
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int start = 0; start <= trials; ++start) {
    ScalarField f(n, n);
    if (start == 0) {
      f = witness->mask.cast<double>();
    } else {
      for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = uni(rng);
    }
    double value = embedding(f);
    double sigma = 0.5;
    for (int step = 0; step < 150 && sigma > 1e-4; ++step) {
      ScalarField g = f;
      for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] *= std::exp(sigma * gauss(rng));
      const double v = embedding(g);
      if (v > value) {
        value = v;
        f = std::move(g);
        sigma *= 1.2;
      } else {
        sigma *= 0.85;
      }
    }
    report.c1_empirical = std::max(report.c1_empirical, value);
  }

  // Embedding form f -> sum a_R <f>_R^2 as a matrix over cells.
  if (n * n <= 1024) {
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n * n, n * n);
    for (const auto& r : rects) {
      const double w = r.a / (static_cast<double>(r.box.area()) * r.box.area());
      for (int x = r.box.x0; x < r.box.x1; ++x)
        for (int y = r.box.y0; y < r.box.y1; ++y)
          for (int x2 = r.box.x0; x2 < r.box.x1; ++x2)
            for (int y2 = r.box.y0; y2 < r.box.y1; ++y2) q(x * n + y, x2 * n + y2) += w;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q, Eigen::EigenvaluesOnly);
    report.c1_exact = es.eigenvalues().maxCoeff() / cell;
  }
  report.ratio = report.c2 > 0.0 ? report.c1_empirical / report.c2 : 0.0;
  return report;
}

ScalarField square_function(const VectorSpectrum2D& f) {
  const int n = f.side();
  ScalarField s2 = ScalarField::Zero(n, n);
  for (int sx = 1; sx < n; ++sx) {
    for (int sy = 1; sy < n; ++sy) {
      const double c = f.at(sx, sy).squaredNorm();
      if (c == 0.0) continue;
      const CellBox b = box_of_slots(sx, sy, f.depth());
      const double area = static_cast<double>(b.area()) / (static_cast<double>(n) * n);
      s2.block(b.x0, b.y0, b.x1 - b.x0, b.y1 - b.y0).array() += c / area;
    }
  }
  return s2.cwiseSqrt();
}

ScalarField square_function(const MatrixSpectrum2D& f) {
  const FieldShape flat{f.depth(), f.dim() * f.dim()};
  return square_function(VectorSpectrum2D(flat, f.data()));
}

ScalarField strong_maximal(const ScalarField& g) { return dyadic_max(g, true, true); }
ScalarField maximal_x(const ScalarField& g) { return dyadic_max(g, true, false); }
ScalarField maximal_y(const ScalarField& g) { return dyadic_max(g, false, true); }

ScalarField pointwise_norm(const SampledField2D& f) {
  const int n = f.side();
  ScalarField out(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) out(x, y) = f.at(x, y).norm();
  return out;
}

namespace {

MatrixSpectrum2D bilinear_form(const VectorSpectrum2D& f, const VectorSpectrum2D& g, HaarKind gx,
                               HaarKind gy, HaarKind fx, HaarKind fy) {
  require_same_shape(f.shape(), g.shape(), "bilinear form");
  const FrameTable2D ft = frame_analyze(synthesize2d(f));
  const FrameTable2D gt = frame_analyze(synthesize2d(g));
  const AxisFrame& frame = ft.axis();
  const int d = f.dim();
  MatrixSpectrum2D out(f.shape());
  for (int sx = 1; sx < f.side(); ++sx) {
    const DyadicInterval i = DyadicInterval::from_heap(sx);
    for (int sy = 1; sy < f.side(); ++sy) {
      const DyadicInterval j = DyadicInterval::from_heap(sy);
      const double w = 1.0 / std::sqrt(i.measure() * j.measure());
      const Eigen::Map<const CVector> gv(gt.at(frame.position(gx, i), frame.position(gy, j)), d);
      const Eigen::Map<const CVector> fv(ft.at(frame.position(fx, i), frame.position(fy, j)), d);
      out.at(sx, sy) = w * gv * fv.adjoint();
    }
  }
  return out;
}

}  // namespace

MatrixSpectrum2D pi1(const VectorSpectrum2D& f, const VectorSpectrum2D& g) {
  return bilinear_form(f, g, HaarKind::kCancellative, HaarKind::kCancellative, HaarKind::kAverage,
                       HaarKind::kAverage);
}

MatrixSpectrum2D pi2(const VectorSpectrum2D& f, const VectorSpectrum2D& g) {
  return bilinear_form(f, g, HaarKind::kAverage, HaarKind::kCancellative, HaarKind::kCancellative,
                       HaarKind::kAverage);
}

ScalarField s_tilde(const VectorSpectrum2D& f) {
  const int n = f.side();
  const int d = f.dim();
  const SampledField2D samples = synthesize2d(f);
  // phi(I, y) = || <f(., y), h_I> ||, indexed (heap I, y).
  ScalarField phi = ScalarField::Zero(n, n);
  for (int y = 0; y < n; ++y) {
    SampledField1D line(f.depth(), d);
    for (int x = 0; x < n; ++x) line.at(x) = samples.at(x, y);
    const VectorSpectrum1D coef = analyze1d(line);
    for (int h = 1; h < n; ++h) phi(h, y) = coef.at(h).norm();
  }
  const ScalarField mphi = maximal_y(phi);
  ScalarField s2 = ScalarField::Zero(n, n);
  for (int h = 1; h < n; ++h) {
    const DyadicInterval i = DyadicInterval::from_heap(h);
    const auto [x0, x1] = i.cells(f.depth());
    for (int x = x0; x < x1; ++x) s2.row(x).array() += mphi.row(h).array().square() / i.measure();
  }
  return s2.cwiseSqrt();
}

double l2_norm(const ScalarField& s) {
  return std::sqrt(s.squaredNorm() / static_cast<double>(s.size()));
}

}  // namespace haarlab
