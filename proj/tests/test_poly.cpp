#include "doctest.h"
#include "phasekit/poly.hpp"
#include "support.hpp"

using namespace phasekit;
using namespace phasekit::testing;

namespace {

NonClassicalPoly single_term(const Field& f, Exponents e, unsigned j, Residue c = 1,
                             PhaseValue alpha = {}) {
  const auto n = static_cast<unsigned>(e.size());
  return NonClassicalPoly(f, n, alpha, {{Monomial{std::move(e), j}, c}});
}

// Independent interpolation oracle: expand every point indicator
// prod_i (1 - (x_i - a_i)^{p-1}) symbolically and sum. O(p^{2n}).
ClassicalPoly indicator_interpolation(const Field& f, unsigned n, const std::vector<Residue>& values) {
  const VectorSpace space(f.p(), n);
  ClassicalPoly total(f, n);
  for (std::size_t a = 0; a < space.size(); ++a) {
    if (values[a] == 0) continue;
    const auto pt = space.point(a);
    ClassicalPoly indicator(f, n, {{Exponents(n, 0), 1}});
    for (unsigned i = 0; i < n; ++i) {
      Exponents xi(n, 0);
      xi[i] = 1;
      // (x_i - a_i)^{p-1} by repeated multiplication.
      const ClassicalPoly diff(f, n, {{xi, 1}, {Exponents(n, 0), f.neg(pt[i])}});
      ClassicalPoly power(f, n, {{Exponents(n, 0), 1}});
      for (unsigned t = 0; t + 1 < f.p(); ++t) power = power * diff;
      indicator = indicator * (ClassicalPoly(f, n, {{Exponents(n, 0), 1}}) - power);
    }
    total = total + scale(indicator, values[a]);
  }
  return total;
}

}  // namespace

TEST_CASE("eval_nonclassical examples") {
  const Field f(2);
  CHECK(eval_nonclassical(single_term(f, {1}, 1), FpVector{1}) == PhaseValue{1, 2});
  const auto p = single_term(f, {1, 1}, 2, 1, f.phase(3, 3));
  CHECK(eval_nonclassical(p, FpVector{0, 1}) == f.phase(3, 3));
  const NonClassicalPoly sum(f, 2, {}, {{Monomial{{1, 0}, 2}, 1}, {Monomial{{0, 1}, 2}, 1}});
  CHECK(eval_nonclassical(sum, FpVector{1, 1}) == PhaseValue{1, 2});
  CHECK_THROWS_AS(eval_nonclassical(sum, FpVector{1}), Error);
}

TEST_CASE("canonicalize examples") {
  const Field f(2);
  const auto c1 = canonicalize(PhaseTable(f, 1, {f.phase(0, 0), f.phase(1, 1)}));
  CHECK(c1 == single_term(f, {1}, 0));
  const auto c2 = canonicalize(PhaseTable(f, 1, {f.phase(1, 2), f.phase(3, 2)}));
  CHECK(c2 == single_term(f, {1}, 0, 1, f.phase(1, 2)));
  const auto c3 = canonicalize(PhaseTable(f, 1, {f.phase(0, 0), f.phase(1, 2)}));
  CHECK(c3 == single_term(f, {1}, 1));
  CHECK_THROWS_AS(PhaseTable(f, 2, std::vector<PhaseValue>(3)), Error);
}

TEST_CASE("table evaluation agrees with pointwise evaluation") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(100 + p);
    for (int trial = 0; trial < 20; ++trial) {
      const unsigned n = 1 + trial % 3;
      const auto poly = random_nonclassical(rng, f, n, 3);
      const auto table = evaluate_table(poly);
      for (std::size_t x = 0; x < table.size(); ++x) {
        CHECK(table[x] == eval_nonclassical(poly, table.space().point(x)));
      }
    }
  }
}

TEST_CASE("canonical form round trip is exact") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(7 * p);
    for (int trial = 0; trial < 60; ++trial) {
      const unsigned n = 1 + trial % 3;
      const auto poly = random_nonclassical(rng, f, n, 1 + trial % 3);
      CHECK(canonicalize(evaluate_table(poly)) == poly);
    }
  }
}

TEST_CASE("classical interpolation matches the indicator-expansion oracle") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(p);
    for (unsigned n = 1; n <= 2; ++n) {
      const VectorSpace space(p, n);
      std::vector<Residue> values(space.size());
      for (auto& v : values) v = random_residue(rng, p);
      CHECK(interpolate_classical(f, n, values) == indicator_interpolation(f, n, values));
    }
  }
}

TEST_CASE("additive_derivative examples") {
  const Field f(2);
  const auto d = additive_derivative(single_term(f, {1}, 1), FpVector{1});
  CHECK(d == single_term(f, {1}, 0, 1, f.phase(1, 2)));
  CHECK(additive_derivative(single_term(f, {1}, 1), FpVector{0}).is_zero());
  const auto lin = additive_derivative(single_term(f, {1}, 0), FpVector{1});
  CHECK(lin == NonClassicalPoly(f, 1, f.phase(1, 1), {}));
}

TEST_CASE("derivatives strictly lower the degree and d+1 of them vanish") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    Rng rng(31 + p);
    for (int trial = 0; trial < 25; ++trial) {
      const unsigned n = 1 + trial % 3;
      auto poly = random_nonclassical(rng, f, n, 2, 2 * p, 0.4);
      const unsigned d = degree_and_depth(poly).degree;
      for (unsigned step = 0; step <= d; ++step) {
        const auto next = additive_derivative(poly, random_vector(rng, p, n));
        const unsigned before = degree_and_depth(poly).degree;
        if (before >= 1) CHECK(degree_and_depth(next).degree < before);
        poly = next;
      }
      CHECK(poly.is_zero());
    }
  }
}

TEST_CASE("iterated_difference agrees with repeated additive_derivative") {
  const Field f(3);
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    auto poly = random_nonclassical(rng, f, 2, 3);
    const auto shifts = random_shifts(rng, 3, 2, 3);
    const auto x = random_vector(rng, 3, 2);
    auto iter = poly;
    for (const auto& h : shifts) iter = additive_derivative(iter, h);
    CHECK(iterated_difference(poly, shifts, x) == eval_nonclassical(iter, x));
  }
}

TEST_CASE("degree_and_depth examples") {
  CHECK(degree_and_depth(single_term(Field(2), {1}, 1)) == DegreeDepth{2, 2});
  CHECK(degree_and_depth(single_term(Field(2), {1, 1}, 0)) == DegreeDepth{2, 1});
  CHECK(degree_and_depth(single_term(Field(3), {2}, 0)) == DegreeDepth{2, 1});
  CHECK(degree_and_depth(NonClassicalPoly(Field(3), 2)) == DegreeDepth{0, 0});
}

TEST_CASE("depth never exceeds floor((d-1)/(p-1)) + 1") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(p * 17);
    for (int trial = 0; trial < 50; ++trial) {
      const auto dd = degree_and_depth(random_nonclassical(rng, f, 2, 3));
      if (dd.degree > 0) CHECK(dd.depth <= (dd.degree - 1) / (p - 1) + 1);
    }
  }
}

TEST_CASE("classical-plus-constant iff every term has j = 0") {
  const Field f(3);
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const auto poly = random_nonclassical(rng, f, 2, 2);
    const auto table = evaluate_table(poly);
    bool in_coset = true;
    const auto base = table[0];
    for (const auto& v : table.values()) in_coset &= f.combine(v, base, -1).depth <= 1;
    CHECK(poly.is_classical_plus_constant() == in_coset);
  }
}

TEST_CASE("discrete Leibniz rule on classical polynomials") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(p + 50);
    for (int trial = 0; trial < 20; ++trial) {
      const unsigned n = 1 + trial % 3;
      const auto a = random_classical(rng, f, n, 3);
      const auto b = random_classical(rng, f, n, 3);
      const auto h = random_vector(rng, p, n);
      const std::vector<FpVector> hs{h};
      const VectorSpace space(p, n);
      for (std::size_t xi = 0; xi < space.size(); ++xi) {
        const auto x = space.point(xi);
        const Residue da = iterated_difference(a, hs, x);
        const Residue db = iterated_difference(b, hs, x);
        const Residue lhs = iterated_difference(a * b, hs, x);
        const Residue rhs = f.add(f.add(f.mul(da, b.eval(x)), f.mul(a.eval(x), db)), f.mul(da, db));
        CHECK(lhs == rhs);
      }
    }
  }
}

TEST_CASE("compose_linear examples and invertibility") {
  const Field f(2);
  const auto p1 = single_term(f, {1, 0}, 1);
  CHECK(compose_linear(p1, FpMatrix::identity(2)) == p1);
  CHECK(compose_linear(p1, FpMatrix(2, {0, 1, 1, 0})) == single_term(f, {0, 1}, 1));
  const auto shifted = single_term(f, {1, 0}, 1, 1, f.phase(1, 3));
  CHECK(compose_linear(shifted, FpMatrix(2)) == NonClassicalPoly(f, 2, f.phase(1, 3), {}));

  for (unsigned p : {2u, 3u}) {
    const Field fp(p);
    Rng rng(p + 90);
    for (int trial = 0; trial < 20; ++trial) {
      const unsigned n = 2 + trial % 2;
      const auto poly = random_nonclassical(rng, fp, n, 2);
      const auto m = random_invertible(rng, fp, n);
      const auto there = compose_linear(poly, m);
      CHECK(degree_and_depth(there).degree == degree_and_depth(poly).degree);
      CHECK(compose_linear(there, *m.inverse(fp)) == poly);
      FpMatrix singular(n);
      for (unsigned c = 0; c < n; ++c) singular.at(0, c) = random_residue(rng, p);
      CHECK(degree_and_depth(compose_linear(poly, singular)).degree <=
            degree_and_depth(poly).degree);
    }
  }
}

TEST_CASE("classical polynomials convert to and from phases") {
  const Field f(3);
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const auto q = random_classical(rng, f, 2, 4);
    const auto phase = q.to_phase();
    CHECK(phase.is_classical_plus_constant());
    CHECK(ClassicalPoly::from_phase(phase) == q);
    const auto values = evaluate_table(q);
    const auto table = evaluate_table(phase);
    for (std::size_t x = 0; x < values.size(); ++x) CHECK(table[x] == f.embed(values[x]));
  }
  CHECK_THROWS_AS(ClassicalPoly::from_phase(single_term(Field(2), {1}, 1)), Error);
}
