#include <cstdint>

#include "doctest.h"
#include "phasekit/quasisym.hpp"
#include "support.hpp"

using namespace phasekit;
using namespace phasekit::testing;

namespace {

FpVector unit(unsigned n, unsigned i) {
  FpVector e(n, 0);
  e[i] = 1;
  return e;
}

std::int64_t factorial(unsigned k) {
  std::int64_t r = 1;
  for (unsigned i = 2; i <= k; ++i) r *= i;
  return r;
}

std::int64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::int64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

TEST_CASE("decompose_degree examples") {
  CHECK(decompose_degree(3, 2) == DegreeSplit{3, 1, 2});
  CHECK(decompose_degree(5, 3) == DegreeSplit{5, 1, 2});
  CHECK(decompose_degree(2, 3) == DegreeSplit{2, 2, 0});
  CHECK(decompose_degree(4, 3) == DegreeSplit{4, 2, 1});
  CHECK_THROWS_AS(decompose_degree(0, 3), Error);
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    for (unsigned d = 1; d < 30; ++d) {
      const auto s = decompose_degree(d, p);
      CHECK(s.r + (p - 1) * s.ell == d);
      CHECK(s.r > 0);
      CHECK(s.r < p);
    }
  }
}

TEST_CASE("make_counterexample examples") {
  const Field f2(2), f3(3);
  const auto c = make_counterexample(f2, 4, 3);
  CHECK(degree_and_depth(c.poly) == DegreeDepth{3, 3});
  CHECK_FALSE(c.boundary);
  NonClassicalPoly::TermMap expected;
  for (unsigned i = 0; i < 3; ++i) {
    const auto e = unit(3, i);
    expected[Monomial{Exponents(e.begin(), e.end()), 2}] = 1;
  }
  CHECK(c.poly == NonClassicalPoly(f2, 3, {}, expected));
  CHECK(eval_nonclassical(c.poly, FpVector{1, 1, 0}) == f2.phase(2, 3));

  const auto c3 = make_counterexample(f3, 5, 2);
  CHECK(degree_and_depth(c3.poly) == DegreeDepth{4, 2});
  CHECK(c3.split == DegreeSplit{4, 2, 1});
  CHECK(eval_nonclassical(c3.poly, FpVector{2, 1}) == f3.phase(5, 2));

  const auto b = make_counterexample(f2, 3, 1);
  CHECK(b.boundary);
  CHECK(b.poly == NonClassicalPoly(f2, 1, {}, {{Monomial{{1}, 1}, 1}}));
  CHECK_THROWS_AS(make_counterexample(f2, 2, 3), Error);
  CHECK_THROWS_AS(make_counterexample(f3, 3, 3), Error);
}

TEST_CASE("compositions and their text form") {
  CHECK(Composition({2, 1}).to_string() == "[2,1]");
  CHECK(Composition::parse("[2, 1]") == Composition({2, 1}));
  CHECK_THROWS_AS(Composition::parse("[2,0]"), Error);
  CHECK_THROWS_AS(Composition::parse("2,1"), Error);
  CHECK_THROWS_AS(Composition({}), Error);
  CHECK_THROWS_AS(Composition({3}).check(Field(3)), Error);
  CHECK(compositions(4, 2).size() == 1);
  // Parts in {1,2}: Fibonacci counts.
  CHECK(compositions(5, 3).size() == 8);
  CHECK(compositions(3, 5).size() == 4);
  for (const auto& a : compositions(5, 3)) CHECK(a.weight() == 5);
}

TEST_CASE("quasisym_poly examples") {
  const Field f2(2), f3(3);
  CHECK(quasisym_poly(f2, Composition({1, 1}), 2) == ClassicalPoly(f2, 2, {{{1, 1}, 1}}));
  CHECK(quasisym_poly(f3, Composition({2, 1}), 2) == ClassicalPoly(f3, 2, {{{2, 1}, 1}}));
  CHECK(quasisym_poly(f3, Composition({1}), 3) ==
        ClassicalPoly(f3, 3, {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, 1}}));
  CHECK(quasisym_poly(f3, Composition({1, 1, 1}), 2).is_zero());
  CHECK(quasisym_poly(f3, Composition({2, 1}), 4).degree() == 3);

  Rng rng(3);
  for (const auto& a : compositions(4, 3)) {
    const auto q = quasisym_poly(f3, a, 5);
    for (int t = 0; t < 20; ++t) {
      const auto x = random_vector(rng, 3, 5);
      CHECK(quasisym_eval(f3, a, x) == q.eval(x));
    }
  }
}

TEST_CASE("iota_form examples") {
  const Field f2(2), f3(3);
  const std::vector<FpVector> ones{{1}, {1}, {1}};
  CHECK(iota_form(f2, decompose_degree(3, 2), ones) == 1);
  CHECK(iota_form(f2, decompose_degree(3, 2), ones, FormMode::brute_force) == 1);
  CHECK(iota_form(f3, decompose_degree(2, 3), std::vector<FpVector>{{1}, {1}}) == 2);
  CHECK(iota_form(f3, decompose_degree(2, 3), std::vector<FpVector>{{1}, {1}},
                  FormMode::brute_force) == 2);
  const std::vector<FpVector> with_zero{{1, 2}, {0, 0}, {2, 1}};
  CHECK(iota_form(f3, decompose_degree(3, 3), with_zero) == 0);
  CHECK(iota_form(f3, decompose_degree(3, 3), with_zero, FormMode::brute_force) == 0);
  CHECK_THROWS_AS(iota_form(f3, decompose_degree(4, 3), ones), Error);
}

TEST_CASE("tau_form examples") {
  const Field f2(2), f5(5);
  const std::vector<FpVector> e12{unit(2, 0), unit(2, 1)};
  CHECK(tau_form(f2, Composition({1, 1}), e12) == 1);
  CHECK(tau_form(f2, Composition({1, 1}), e12, FormMode::brute_force) == 1);
  for (unsigned k = 1; k < 5; ++k) {
    const std::vector<FpVector> all_e1(k, unit(2, 0));
    const auto want = static_cast<Residue>(factorial(k) % 5);
    CHECK(tau_form(f5, Composition({k}), all_e1) == want);
    CHECK(tau_form(f5, Composition({k}), all_e1, FormMode::brute_force) == want);
  }
  const std::vector<FpVector> with_zero{{1, 1, 0}, {0, 0, 0}, {1, 0, 1}};
  CHECK(tau_form(f5, Composition({2, 1}), with_zero) == 0);
  CHECK_THROWS_AS(tau_form(f5, Composition({2, 1}), e12), Error);
}

TEST_CASE("vector forms") {
  const Field f2(2);
  CHECK(iota_vector(f2, decompose_degree(3, 2), std::vector<FpVector>{{1, 0}, {1, 1}}, 2) ==
        FpVector{1, 0});
  CHECK(tau_vector(f2, Composition({1, 1}), std::vector<FpVector>{unit(2, 0)}, 2) ==
        FpVector{0, 1});
  // Closed form for I_k coordinates.
  const Field f3(3);
  Rng rng(12);
  for (unsigned k = 1; k <= 5; ++k) {
    const auto split = decompose_degree(k, 3);
    const auto h = random_shifts(rng, 3, 3, k - 1);
    const auto v = iota_vector(f3, split, h, 3);
    for (unsigned i = 0; i < 3; ++i) {
      Residue prod = f3.mul(split.ell % 2 ? 2 : 1, f3.factorial(split.r));
      for (const auto& hj : h) prod = f3.mul(prod, hj[i]);
      CHECK(v[i] == prod);
    }
    CHECK(iota_vector(f3, split, h, 3, FormMode::brute_force) == v);
  }
}

TEST_CASE("symbolic forms equal the brute-force derivative and are constant in x") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    for (unsigned k = 1; k <= 5; ++k) {
      for (unsigned n = 1; n <= 3; ++n) {
        const auto report = verify_derivative_forms(f, k, n, 40, 1000 * p + 10 * k + n);
        CHECK_MESSAGE(report.passed(), report.name, ": ", report.counterexample.value_or(""));
        CHECK(report.checked > 0);
      }
    }
  }
}

TEST_CASE("multiaffine_leading_coeff examples") {
  const Field f2(2), f3(3);
  const auto xy = [&](std::span<const Residue> z) { return f2.mul(z[0], z[1]); };
  CHECK(multiaffine_leading_coeff(f2, 2, xy) == 1);
  const auto xy_x = [&](std::span<const Residue> z) { return f2.add(f2.mul(z[0], z[1]), z[0]); };
  CHECK(multiaffine_leading_coeff(f2, 2, xy_x) == 1);
  const auto lin = [&](std::span<const Residue> z) { return f3.add(f3.mul(2, z[0]), 1); };
  CHECK(multiaffine_leading_coeff(f3, 1, lin) == 2);
  const auto square = [&](std::span<const Residue> z) { return f3.mul(z[0], z[0]); };
  CHECK_THROWS_AS(multiaffine_leading_coeff(f3, 1, square), Error);
  CHECK(multiaffine_leading_coeff(f3, 0, [](std::span<const Residue>) { return Residue{2}; }) == 2);
}

TEST_CASE("leading coefficient closed form matches the product formula") {
  // a_1! C(k-1, a_1-1) prod_{j>=2} (-a_j! C(k - a_1 - ... - a_{j-1}, a_j)) as integers.
  for (unsigned k = 1; k <= 7; ++k) {
    for (const auto& a : compositions(k, 8)) {
      std::int64_t prod = factorial(a[0]) * binomial(k - 1, a[0] - 1);
      unsigned used = a[0];
      for (unsigned j = 1; j < a.size(); ++j) {
        prod *= -factorial(a[j]) * binomial(k - used, a[j]);
        used += a[j];
      }
      const std::int64_t closed = (a.size() % 2 == 1 ? 1 : -1) * std::int64_t(a[0]) * factorial(k - 1);
      CHECK(prod == closed);
    }
  }
}

TEST_CASE("replication keeps every tau value at its prefix value") {
  const Field f(3);
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const unsigned k = 2 + trial % 4;
    const unsigned len = trial % 3;
    const unsigned m = replication_width(3, k);
    CHECK(m >= k);
    std::vector<FpVector> full, pre;
    for (unsigned j = 0; j + 1 < k; ++j) {
      auto row = random_vector(rng, 3, len);
      pre.push_back(row);
      row.insert(row.end(), m, random_residue(rng, 3));
      full.push_back(row);
    }
    for (unsigned w = 1; w < k; ++w) {
      for (const auto& beta : compositions(w, 3)) {
        const std::vector<FpVector> hs(full.begin(), full.begin() + w);
        const std::vector<FpVector> hp(pre.begin(), pre.begin() + w);
        const Residue at_prefix = len == 0 ? 0 : tau_form(f, beta, hp);
        CHECK(tau_form(f, beta, hs) == at_prefix);
      }
    }
  }
}

TEST_CASE("leading coefficient of T_alpha") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    for (unsigned k = 1; k <= 5; ++k) {
      const auto report = verify_leading_coefficients(f, k, 4, 31 * p + k);
      CHECK_MESSAGE(report.passed(), report.name, ": ", report.counterexample.value_or(""));
    }
  }
  const Field f3(3);
  CHECK(expected_leading_coeff(f3, Composition({2})) == 2);
  CHECK(expected_leading_coeff(f3, Composition({1, 1})) == 2);
  CHECK(expected_leading_coeff(f3, Composition({2, 2})) == 0);
  const Field f5(5);
  // (-1)^2 * 1 * 3! = 6 = 1 mod 5
  CHECK(expected_leading_coeff(f5, Composition({1, 2, 1})) == 1);
  CHECK(tau_leading_coefficient(f5, Composition({1, 2, 1}),
                                std::vector<FpVector>(3, FpVector{2, 4})) == 1);
}

TEST_CASE("combined leading coefficient is (-1)^l r! once k >= p+1") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    for (unsigned k = p + 1; k <= 5; ++k) {
      const auto report = verify_combined_leading(f, k, 5, 7 * k + p);
      CHECK_MESSAGE(report.passed(), report.name, ": ", report.counterexample.value_or(""));
    }
  }
  CHECK_THROWS_AS(verify_combined_leading(Field(3), 3, 1, 0), Error);
}

TEST_CASE("Wilson's theorem") {
  for (unsigned p : {2u, 3u, 5u, 7u, 11u, 13u}) CHECK(wilson_holds(Field(p)));
}
