#pragma once

// Seeded random instances for property checks.

#include <complex>
#include <random>
#include <vector>

#include "phasekit/fp.hpp"
#include "phasekit/poly.hpp"

namespace phasekit {

using Rng = std::mt19937_64;

inline Residue random_residue(Rng& rng, unsigned p) {
  return static_cast<Residue>(std::uniform_int_distribution<unsigned>(0, p - 1)(rng));
}

inline FpVector random_vector(Rng& rng, unsigned p, unsigned n) {
  FpVector v(n);
  for (auto& x : v) x = random_residue(rng, p);
  return v;
}

inline std::vector<FpVector> random_shifts(Rng& rng, unsigned p, unsigned n, unsigned k) {
  std::vector<FpVector> h;
  for (unsigned i = 0; i < k; ++i) h.push_back(random_vector(rng, p, n));
  return h;
}

inline PhaseValue random_phase(Rng& rng, const Field& f, unsigned max_depth) {
  const unsigned d = std::uniform_int_distribution<unsigned>(0, max_depth)(rng);
  return f.phase(std::uniform_int_distribution<std::uint64_t>(0, f.modulus(d) - 1)(rng), d);
}

/// Every monomial index e != 0 in F_p^n as an exponent vector.
inline std::vector<Exponents> all_exponents(unsigned p, unsigned n) {
  std::vector<Exponents> out;
  const VectorSpace space(p, n);
  for (std::size_t idx = 1; idx < space.size(); ++idx) {
    const auto x = space.point(idx);
    out.emplace_back(x.begin(), x.end());
  }
  return out;
}

/// Random canonical polynomial: each (exps, j) with j < depth and weight +
/// j(p-1) <= max_degree gets a random coefficient with probability `density`.
inline NonClassicalPoly random_nonclassical(Rng& rng, const Field& f, unsigned n, unsigned depth,
                                            unsigned max_degree = ~0u, double density = 0.5) {
  std::bernoulli_distribution keep(density);
  NonClassicalPoly::TermMap terms;
  for (const auto& e : all_exponents(f.p(), n)) {
    unsigned w = 0;
    for (auto v : e) w += v;
    for (unsigned j = 0; j < depth; ++j) {
      if (w + j * (f.p() - 1) > max_degree) continue;
      if (keep(rng)) terms[Monomial{e, j}] = random_residue(rng, f.p());
    }
  }
  return NonClassicalPoly(f, n, random_phase(rng, f, depth), std::move(terms));
}

inline ClassicalPoly random_classical(Rng& rng, const Field& f, unsigned n, unsigned max_degree,
                                      double density = 0.5, bool with_constant = true) {
  std::bernoulli_distribution keep(density);
  ClassicalPoly::TermMap terms;
  if (with_constant) terms[Exponents(n, 0)] = random_residue(rng, f.p());
  for (const auto& e : all_exponents(f.p(), n)) {
    unsigned w = 0;
    for (auto v : e) w += v;
    if (w <= max_degree && keep(rng)) terms[e] = random_residue(rng, f.p());
  }
  return ClassicalPoly(f, n, std::move(terms));
}

/// Random table with |f(x)| <= 1.
inline ComplexTable random_bounded_table(Rng& rng, const Field& f, unsigned n) {
  std::uniform_real_distribution<double> radius(0.0, 1.0), angle(0.0, 6.283185307179586);
  ComplexTable t(f, n);
  for (std::size_t x = 0; x < t.size(); ++x) t[x] = std::polar(radius(rng), angle(rng));
  return t;
}

inline FpMatrix random_invertible(Rng& rng, const Field& f, unsigned n) {
  while (true) {
    FpMatrix m(n);
    for (unsigned r = 0; r < n; ++r)
      for (unsigned c = 0; c < n; ++c) m.at(r, c) = random_residue(rng, f.p());
    if (m.inverse(f)) return m;
  }
}

}  // namespace phasekit
