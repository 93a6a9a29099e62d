#include <cmath>

#include "doctest.h"
#include "phasekit/error.hpp"
#include "phasekit/fp.hpp"
#include "support.hpp"

using namespace phasekit;
using namespace phasekit::testing;

namespace {

bool close(std::complex<double> a, std::complex<double> b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("field context rejects composite moduli") {
  CHECK_THROWS_AS(Field(4), Error);
  CHECK_THROWS_AS(Field(1), Error);
  CHECK_NOTHROW(Field(2));
  CHECK_NOTHROW(Field(251));
  CHECK(Field(2).max_depth() == 16);
  // 17^16 > 2^62, so the bound is clipped.
  CHECK(Field(17).max_depth() < 16);
}

TEST_CASE("phase_combine examples") {
  const Field f(2);
  const auto eighth = f.phase(1, 3);
  CHECK(f.combine(eighth, eighth, +1) == PhaseValue{1, 2});
  CHECK(f.combine(eighth, f.phase(7, 3), +1) == PhaseValue{0, 0});
  CHECK(f.combine(f.phase(1, 2), eighth, -1) == PhaseValue{1, 3});
}

TEST_CASE("phase normalization") {
  const Field f(3);
  CHECK(f.phase(3, 2) == PhaseValue{1, 1});
  CHECK(f.phase(9, 2) == PhaseValue{0, 0});
  CHECK(f.phase(0, 5) == PhaseValue{0, 0});
  Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_phase(rng, f, 6);
    CHECK(f.normalize(f.normalize(a)) == f.normalize(a));
    CHECK((a.numerator == 0 ? a.depth == 0 : a.numerator % 3 != 0));
  }
}

TEST_CASE("phase_combine is an abelian group on random triples") {
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    const Field f(p);
    Rng rng(p);
    for (int i = 0; i < 300; ++i) {
      const auto a = random_phase(rng, f, 5);
      const auto b = random_phase(rng, f, 5);
      const auto c = random_phase(rng, f, 5);
      CHECK(f.combine(f.combine(a, b, 1), c, 1) == f.combine(a, f.combine(b, c, 1), 1));
      CHECK(f.combine(a, b, 1) == f.combine(b, a, 1));
      CHECK(f.combine(a, PhaseValue{}, 1) == a);
      CHECK(f.combine(f.combine(a, b, 1), b, -1) == a);
      CHECK(f.combine(a, f.negate(a), 1) == PhaseValue{});
    }
  }
}

TEST_CASE("phase_to_complex examples") {
  const Field f2(2);
  CHECK(f2.to_complex({}) == std::complex<double>(1.0, 0.0));
  CHECK(f2.to_complex(f2.phase(1, 1)) == std::complex<double>(-1.0, 0.0));
  const double h = std::sqrt(2.0) / 2;
  CHECK(close(f2.to_complex(f2.phase(1, 3)), {h, h}));
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto a = random_phase(rng, f2, 16);
    CHECK(std::abs(std::abs(f2.to_complex(a)) - 1.0) <= 2.3e-16);
  }
}

TEST_CASE("e_p examples and the character property") {
  CHECK(Field(2).e_p(1) == std::complex<double>(-1.0, 0.0));
  CHECK(Field(3).e_p(0) == std::complex<double>(1.0, 0.0));
  CHECK(close(Field(3).e_p(2), std::polar(1.0, 4 * M_PI / 3)));
  for (unsigned p : {2u, 3u, 5u, 7u}) {
    const Field f(p);
    for (Residue x = 0; x < p; ++x) {
      for (Residue y = 0; y < p; ++y) {
        CHECK(close(f.e_p(f.add(x, y)), f.e_p(x) * f.e_p(y)));
      }
    }
  }
}

TEST_CASE("F_p -> U_1 is a homomorphism with an explicit inverse") {
  for (unsigned p : {2u, 3u, 5u}) {
    const Field f(p);
    for (Residue x = 0; x < p; ++x) {
      CHECK(f.to_residue(f.embed(x)) == x);
      for (Residue y = 0; y < p; ++y) {
        CHECK(f.embed(f.add(x, y)) == f.combine(f.embed(x), f.embed(y), 1));
      }
    }
  }
  CHECK_THROWS_AS(Field(2).to_residue(Field(2).phase(1, 2)), Error);
}

TEST_CASE("depth bound guards runaway growth") {
  const Field f(2, 4);
  CHECK_THROWS_AS(f.phase(1, 5), Error);
  CHECK_NOTHROW(f.phase(1, 4));
}

TEST_CASE("text forms") {
  const Field f(2);
  CHECK(format_phase(f, f.phase(3, 3)) == "3/2^3");
  CHECK(format_phase(f, {}) == "0/2^0");
  CHECK(parse_phase(f, "3/2^3") == PhaseValue{3, 3});
  CHECK(parse_phase(f, "2/2^2") == PhaseValue{1, 1});
  CHECK_THROWS_AS(parse_phase(f, "1/3^1"), Error);
  CHECK_THROWS_AS(parse_phase(f, "8/2^3"), Error);
  CHECK_THROWS_AS(parse_phase(f, "1/2"), Error);
  const Field f3(3);
  CHECK(parse_vector(f3, "1,0,2") == FpVector{1, 0, 2});
  CHECK(format_vector(FpVector{1, 0, 2}) == "1,0,2");
  CHECK_THROWS_AS(parse_vector(f3, "1,3"), Error);
}

TEST_CASE("vector space layout and translations") {
  const VectorSpace s(3, 3);
  CHECK(s.size() == 27);
  CHECK(s.index(FpVector{1, 0, 2}) == 1 + 2 * 9);
  CHECK(s.point(19) == FpVector{1, 0, 2});
  const auto t = s.translation(FpVector{2, 2, 1});
  CHECK(s.point(t[s.index(FpVector{1, 0, 2})]) == FpVector{0, 2, 0});
  CHECK_THROWS_AS(s.index(FpVector{1, 0}), Error);
}

TEST_CASE("matrix inverse over F_p") {
  const Field f(5);
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const auto m = random_invertible(rng, f, 3);
    const auto inv = m.inverse(f);
    REQUIRE(inv);
    CHECK(m.multiply(f, *inv) == FpMatrix::identity(3));
  }
  FpMatrix singular(2, {1, 2, 2, 4});
  CHECK_FALSE(singular.inverse(f).has_value());
}
