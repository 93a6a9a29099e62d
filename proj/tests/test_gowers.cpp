#include <cmath>

#include "doctest.h"
#include "phasekit/gowers.hpp"
#include "support.hpp"

using namespace phasekit;
using namespace phasekit::testing;

namespace {

constexpr double kTol = 1e-9;

NonClassicalPoly single_term(const Field& f, Exponents e, unsigned j, Residue c = 1) {
  const auto n = static_cast<unsigned>(e.size());
  return NonClassicalPoly(f, n, {}, {{Monomial{std::move(e), j}, c}});
}

// Definition-level oracle: apply mult_derivative along every shift tuple and
// average over x.
double norm_by_definition(const ComplexTable& f, unsigned d) {
  const auto& space = f.space();
  std::vector<std::size_t> h(d, 0);
  std::complex<double> total = 0;
  while (true) {
    ComplexTable g = f;
    for (unsigned t = 0; t < d; ++t) g = mult_derivative(g, space.point(h[t]));
    for (const auto& v : g.values()) total += v;
    unsigned t = 0;
    while (t < d && ++h[t] == space.size()) h[t++] = 0;
    if (t == d) break;
  }
  const double mean = std::abs(total) / std::pow(double(space.size()), d + 1);
  return std::pow(mean, 1.0 / std::ldexp(1.0, d));
}

GowersOptions forced(GowersMethod m) {
  GowersOptions o;
  o.method = m;
  return o;
}

}  // namespace

TEST_CASE("mult_derivative examples") {
  const Field f(3);
  const ComplexTable ones(f, 2, std::vector<std::complex<double>>(9, 1.0));
  const auto d_ones = mult_derivative(ones, FpVector{1, 2});
  for (const auto& v : d_ones.values()) CHECK(v == 1.0);

  ComplexTable lin(f, 1);
  for (Residue x = 0; x < 3; ++x) lin[x] = f.e_p(x);
  const auto d_lin = mult_derivative(lin, FpVector{1});
  for (const auto& v : d_lin.values()) CHECK(std::abs(v - f.e_p(1)) < 1e-15);

  Rng rng(1);
  const auto phase = phase_function(random_nonclassical(rng, f, 2, 2));
  const auto d_zero = mult_derivative(phase, FpVector{0, 0});
  for (const auto& v : d_zero.values()) CHECK(std::abs(v - 1.0) < 1e-15);
  CHECK_THROWS_AS(mult_derivative(phase, FpVector{1}), Error);
}

TEST_CASE("gowers_norm examples") {
  const Field f(2);
  const ComplexTable ones(f, 2, std::vector<std::complex<double>>(4, 1.0));
  for (unsigned d = 1; d <= 3; ++d) CHECK(gowers_norm(ones, d).norm == doctest::Approx(1.0));

  const auto eighth = single_term(f, {1}, 2);
  const double expected = std::pow(0.75, 1.0 / 8);
  CHECK(std::abs(gowers_norm(phase_function(eighth), 3).norm - expected) < kTol);
  CHECK(std::abs(gowers_norm_phase(eighth, 3).norm - expected) < kTol);
  CHECK(std::abs(norm_by_definition(phase_function(eighth), 3) - expected) < kTol);

  CHECK(gowers_norm_phase(NonClassicalPoly(f, 2, f.phase(3, 3), {}), 1).norm == 1.0);
  CHECK_THROWS_AS(gowers_norm(ones, 0), Error);
  ComplexTable big(f, 1, {2.0, 0.0});
  CHECK_THROWS_AS(gowers_norm(big, 2), Error);
}

TEST_CASE("norm of e(P) at order deg(P)+1 is exactly one") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    Rng rng(40 + p);
    // Keeps |V|^{deg+1} small: the x = 0 walk still visits every shift tuple.
    const unsigned max_n = p == 5 ? 1 : 2;
    const unsigned max_deg = p == 5 ? 5 : 4;
    for (int trial = 0; trial < 25; ++trial) {
      const unsigned n = 1 + trial % max_n;
      const auto poly = random_nonclassical(rng, f, n, 3, max_deg);
      const unsigned deg = degree_and_depth(poly).degree;
      const auto r = gowers_norm_phase(poly, deg + 1);
      CHECK(r.norm == 1.0);
      CHECK(r.histogram.size() == 1);
      CHECK(r.histogram.begin()->first == 0);
      if (deg >= 1) {
        // Order deg(P) is in general not 1; must at least be in [0, 1].
        const auto lower = gowers_norm_phase(poly, deg);
        CHECK(lower.norm <= 1.0 + kTol);
      }
    }
  }
}

TEST_CASE("methods agree with each other and with the definition") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    Rng rng(p * 3);
    for (int trial = 0; trial < 12; ++trial) {
      const unsigned n = p == 2 ? 1 + trial % 3 : 1 + trial % 2;
      const unsigned d = 1 + trial % 3;
      const auto poly = random_nonclassical(rng, f, n, 3);
      const auto table = phase_function(poly);
      const double direct = gowers_norm(table, d, forced(GowersMethod::direct_enumeration)).norm;
      const double rec = gowers_norm(table, d, forced(GowersMethod::recursive_table)).norm;
      const double hist = gowers_norm_phase(poly, d).norm;
      const double oracle = norm_by_definition(table, d);
      CHECK(std::abs(direct - oracle) < kTol);
      CHECK(std::abs(rec - oracle) < kTol);
      CHECK(std::abs(hist - oracle) < kTol);

      const auto bounded = random_bounded_table(rng, f, n);
      const double a = gowers_norm(bounded, d, forced(GowersMethod::direct_enumeration)).norm;
      const double b = gowers_norm(bounded, d, forced(GowersMethod::recursive_table)).norm;
      CHECK(std::abs(a - b) < kTol);
      CHECK(std::abs(a - norm_by_definition(bounded, d)) < kTol);
    }
  }
}

TEST_CASE("recursive path is independent of the worker count") {
  const Field f(2);
  Rng rng(77);
  const auto table = random_bounded_table(rng, f, 5);
  GowersOptions one = forced(GowersMethod::recursive_table);
  GowersOptions many = one;
  many.jobs = 4;
  CHECK(gowers_norm(table, 3, one).norm == gowers_norm(table, 3, many).norm);
  const auto poly = random_nonclassical(rng, f, 4, 3);
  GowersOptions hist_many;
  hist_many.jobs = 4;
  CHECK(gowers_norm_phase(poly, 3).histogram == gowers_norm_phase(poly, 3, hist_many).histogram);
}

TEST_CASE("budget caps enumeration") {
  const Field f(2);
  GowersOptions tiny;
  tiny.budget = 10;
  CHECK_THROWS_AS(gowers_norm_phase(single_term(f, {1, 1, 1}, 0), 4, tiny), BudgetExceeded);
  CHECK_THROWS_AS(gowers_norm(phase_function(single_term(f, {1, 1, 1}, 0)), 4, tiny),
                  BudgetExceeded);
}

TEST_CASE("monotonicity in d and the U2 Fourier identity") {
  for (unsigned p : {2u, 3u}) {
    const Field f(p);
    Rng rng(500 + p);
    for (int trial = 0; trial < 15; ++trial) {
      const unsigned n = 1 + trial % (p == 2 ? 4 : 2);
      const auto table = random_bounded_table(rng, f, n);
      double prev = 0.0;
      for (unsigned d = 1; d <= (p == 2 ? 4u : 3u); ++d) {
        const double v = gowers_norm(table, d).norm;
        CHECK(v >= prev - kTol);
        CHECK(v <= 1.0 + kTol);
        prev = v;
      }
      double fourth = 0.0;
      const auto hat = fourier_fp(table);
      for (const auto& c : hat.values()) fourth += std::pow(std::abs(c), 4);
      CHECK(std::abs(std::pow(gowers_norm(table, 2).norm, 4) - fourth) < kTol);
    }
  }
}

TEST_CASE("correlation examples and global phase invariance") {
  const Field f(2);
  const auto e8 = phase_function(single_term(f, {1}, 2));
  CHECK(std::abs(correlation(e8, ClassicalPoly(f, 1)) - std::cos(M_PI / 8)) < kTol);
  CHECK(std::abs(correlation(e8, ClassicalPoly(f, 1, {{{1}, 1}})) - std::sin(M_PI / 8)) < kTol);
  CHECK_THROWS_AS(correlation(e8, ClassicalPoly(f, 2)), Error);

  for (unsigned p : {2u, 3u, 5u}) {
    const Field fp(p);
    Rng rng(p + 600);
    for (int trial = 0; trial < 10; ++trial) {
      const auto q = random_classical(rng, fp, 2, 3);
      CHECK(std::abs(correlation(phase_function(q), q) - 1.0) < kTol);
      const auto table = random_bounded_table(rng, fp, 2);
      const auto alpha = fp.to_complex(random_phase(rng, fp, 4));
      auto rotated = table;
      for (auto& v : rotated.values()) v *= alpha;
      CHECK(std::abs(correlation(rotated, q) - correlation(table, q)) < kTol);
    }
  }
}

TEST_CASE("fourier_fp examples and Parseval") {
  const Field f(3);
  const ComplexTable ones(f, 2, std::vector<std::complex<double>>(9, 1.0));
  const auto hat = fourier_fp(ones);
  CHECK(std::abs(hat[0] - 1.0) < kTol);
  for (std::size_t a = 1; a < 9; ++a) CHECK(std::abs(hat[a]) < kTol);

  const FpVector b{2, 1};
  ComplexTable character(f, 2);
  for (std::size_t x = 0; x < 9; ++x) character[x] = f.e_p(dot(f, b, character.space().point(x)));
  const auto delta = fourier_fp(character);
  for (std::size_t a = 0; a < 9; ++a) {
    CHECK(std::abs(delta[a] - (a == character.space().index(b) ? 1.0 : 0.0)) < kTol);
  }

  const Field f2(2);
  const auto h8 = fourier_fp(phase_function(single_term(f2, {1}, 2)));
  const auto w = std::polar(1.0, M_PI / 4);
  CHECK(std::abs(h8[0] - (1.0 + w) / 2.0) < kTol);
  CHECK(std::abs(h8[1] - (1.0 - w) / 2.0) < kTol);

  for (unsigned p : {2u, 3u, 5u}) {
    Rng rng(p);
    const Field fp(p);
    const auto table = random_bounded_table(rng, fp, p == 5 ? 2 : 3);
    double lhs = 0, rhs = 0;
    const auto hat = fourier_fp(table);
    for (const auto& c : hat.values()) lhs += std::norm(c);
    for (const auto& v : table.values()) rhs += std::norm(v);
    CHECK(std::abs(lhs - rhs / table.size()) < kTol);
  }
}
