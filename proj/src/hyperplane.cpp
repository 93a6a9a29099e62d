#include "phasekit/hyperplane.hpp"

#include <cmath>
#include <string>

#include "phasekit/gowers.hpp"

namespace phasekit {

namespace {

constexpr std::size_t kExhaustiveHyperplane = 1'000'000;
constexpr double kTieTolerance = 1e-12;

// Row 0 is c; the others are e_j for every j except the first nonzero
// coordinate of c.
FpMatrix basis_for(const FpVector& c) {
  const auto n = static_cast<unsigned>(c.size());
  unsigned pivot = 0;
  while (pivot < n && c[pivot] == 0) ++pivot;
  if (pivot == n) return FpMatrix::identity(n);
  FpMatrix b(n);
  for (unsigned col = 0; col < n; ++col) b.at(0, col) = c[col];
  for (unsigned j = 0, row = 1; j < n; ++j) {
    if (j == pivot) continue;
    b.at(row++, j) = 1;
  }
  return b;
}

ClassicalPoly depth_one_part(const NonClassicalPoly& poly) {
  ClassicalPoly::TermMap terms;
  for (const auto& [m, c] : poly.terms()) {
    if (m.j == 0) terms[m.exps] = c;
  }
  return ClassicalPoly(poly.field(), poly.n(), std::move(terms));
}

void check_degree(const NonClassicalPoly& poly) {
  const auto dd = degree_and_depth(poly);
  if (dd.degree > poly.p()) {
    throw Error("degree " + std::to_string(dd.degree) + " exceeds p = " + std::to_string(poly.p()));
  }
  if (dd.depth > 2) throw Error("depth exceeds 2");
}

struct Rotated {
  HyperplaneSplit split;
  FpMatrix inverse;
  /// Q~ with P(My) = alpha + |Q~(y)|/p + |y_1|/p^2 (last term only if c != 0).
  ClassicalPoly q_tilde;
};

Rotated rotate(const NonClassicalPoly& poly) {
  check_degree(poly);
  const Field& field = poly.field();
  const unsigned n = poly.n();
  if (n == 0) throw Error("need at least one variable");
  FpVector c(n, 0);
  for (const auto& [m, coeff] : poly.terms()) {
    if (m.j != 1) continue;
    // Degree <= p leaves only linear monomials at depth 2.
    for (unsigned i = 0; i < n; ++i)
      if (m.exps[i] == 1) c[i] = coeff;
  }
  const FpMatrix b = basis_for(c);
  const FpMatrix m = *b.inverse(field);
  const auto rotated = compose_linear(poly, m);
  const auto q_tilde = depth_one_part(rotated);
  HyperplaneSplit split{c, b, rotated.alpha(), compose_linear(q_tilde, b), std::nullopt};
  return {std::move(split), m, q_tilde};
}

void verify_split(const NonClassicalPoly& poly, const Rotated& r) {
  const Field& field = poly.field();
  const unsigned n = poly.n();
  const VectorSpace hyper(field.p(), n - 1);
  if (hyper.size() > kExhaustiveHyperplane) return;
  FpVector y(n, 0);
  for (std::size_t idx = 0; idx < hyper.size(); ++idx) {
    const auto rest = hyper.point(idx);
    std::copy(rest.begin(), rest.end(), y.begin() + 1);
    const auto x = r.inverse.apply(field, y);
    const auto want = field.combine(r.split.alpha, field.embed(r.split.q.eval(x)), 1);
    if (eval_nonclassical(poly, x) != want) {
      throw Error("hyperplane agreement fails at x = " + format_vector(x));
    }
  }
}

}  // namespace

HyperplaneSplit hyperplane_restriction(const NonClassicalPoly& poly) {
  auto r = rotate(poly);
  verify_split(poly, r);
  return std::move(r.split);
}

CorrelateExtraction extract_classical_correlate(const ComplexTable& f, const NonClassicalPoly& poly) {
  if (f.n() != poly.n() || f.field().p() != poly.p()) {
    throw Error("table and polynomial live on different spaces");
  }
  auto r = rotate(poly);
  verify_split(poly, r);
  const Field& field = poly.field();
  const unsigned p = field.p();
  const auto& space = f.space();

  // g^(a) = E_y f(My) e_p(-Q~(y) - a y_1).
  const auto qt = evaluate_table(r.q_tilde);
  std::vector<std::complex<double>> hat(p, 0.0);
  for (std::size_t yi = 0; yi < space.size(); ++yi) {
    const auto y = space.point(yi);
    const auto fx = f[space.index(r.inverse.apply(field, y))];
    for (Residue a = 0; a < p; ++a) {
      hat[a] += fx * field.e_p(field.neg(field.add(qt[yi], field.mul(a, y[0]))));
    }
  }
  CorrelateExtraction out{std::move(r.split), ClassicalPoly(field, poly.n()), 0.0, 0.0, {}};
  double best = -1.0;
  Residue a = 0;
  for (Residue t = 0; t < p; ++t) {
    const double v = std::abs(hat[t]) / static_cast<double>(space.size());
    out.slice_fourier.push_back(v);
    if (v > best + kTieTolerance) {
      best = v;
      a = t;
    }
  }
  out.split.a = a;
  Exponents y1(poly.n(), 0);
  y1[0] = 1;
  const ClassicalPoly correction(field, poly.n(), {{y1, a}});
  out.q_total = compose_linear(r.q_tilde + correction, out.split.basis_change);
  out.corr = correlation(f, out.q_total);

  const auto pt = evaluate_table(poly);
  std::complex<double> eps = 0;
  for (std::size_t x = 0; x < f.size(); ++x) eps += f[x] * field.to_complex(field.negate(pt[x]));
  out.epsilon = std::abs(eps) / static_cast<double>(f.size());
  return out;
}

}  // namespace phasekit
