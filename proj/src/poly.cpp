#include "phasekit/poly.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace phasekit {

namespace {

void check_exponents(const Field& field, unsigned n, const Exponents& exps) {
  if (exps.size() != n) throw Error("monomial has " + std::to_string(exps.size()) +
                                    " exponents, expected " + std::to_string(n));
  for (auto e : exps) {
    if (e >= field.p()) throw Error("monomial exponent must be < p");
  }
}

Exponents exponents_of(const VectorSpace& space, std::size_t index) {
  Exponents e(space.n());
  for (unsigned i = 0; i < space.n(); ++i) {
    e[i] = static_cast<std::uint8_t>(index % space.p());
    index /= space.p();
  }
  return e;
}

std::size_t index_of(const VectorSpace& space, const Exponents& e) {
  std::size_t idx = 0;
  for (unsigned i = 0; i < space.n(); ++i) idx += e[i] * space.stride(i);
  return idx;
}

// Applies a p x p matrix along every axis of a dense p^n array:
// out[.., k, ..] = sum_a m[k*p + a] * in[.., a, ..]  (mod `mod`).
void axis_transform(std::vector<std::uint64_t>& data, const VectorSpace& space,
                    const std::vector<std::uint64_t>& m, std::uint64_t mod) {
  const unsigned p = space.p();
  std::vector<std::uint64_t> in(p), out(p);
  for (unsigned axis = 0; axis < space.n(); ++axis) {
    const std::size_t stride = space.stride(axis);
    const std::size_t block = stride * p;
    for (std::size_t base = 0; base < data.size(); base += block) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (unsigned a = 0; a < p; ++a) in[a] = data[base + off + a * stride];
        for (unsigned k = 0; k < p; ++k) {
          std::uint64_t acc = 0;
          for (unsigned a = 0; a < p; ++a) {
            if (m[k * p + a] && in[a]) acc = (acc + mulmod(m[k * p + a], in[a], mod)) % mod;
          }
          out[k] = acc;
        }
        for (unsigned k = 0; k < p; ++k) data[base + off + k * stride] = out[k];
      }
    }
  }
}

// Values -> monomial coefficients over F_p, from the single-variable indicator
// expansion 1(x = a) = 1 - (x - a)^{p-1}.
std::vector<std::uint64_t> interpolation_matrix(const Field& f) {
  const unsigned p = f.p();
  std::vector<Residue> binom(p, 0);  // C(p-1, k) mod p
  binom[0] = 1;
  for (unsigned k = 1; k < p; ++k) {
    binom[k] = f.mul(binom[k - 1], f.mul(p - k, f.inv(k)));
  }
  std::vector<std::uint64_t> m(static_cast<std::size_t>(p) * p);
  for (unsigned k = 0; k < p; ++k) {
    for (unsigned a = 0; a < p; ++a) {
      Residue c = f.neg(f.mul(binom[k], f.pow(f.neg(a), p - 1 - k)));
      if (k == 0) c = f.add(c, 1);
      m[k * p + a] = c;
    }
  }
  return m;
}

// Monomial coefficients -> values: m[x*p + e] = x^e (mod `mod`), 0^0 = 1.
std::vector<std::uint64_t> evaluation_matrix(unsigned p, std::uint64_t mod) {
  std::vector<std::uint64_t> m(static_cast<std::size_t>(p) * p);
  for (unsigned x = 0; x < p; ++x) {
    std::uint64_t v = 1 % mod;
    for (unsigned e = 0; e < p; ++e) {
      m[x * p + e] = v;
      v = mulmod(v, x, mod);
    }
  }
  return m;
}

std::uint64_t monomial_value(std::span<const Residue> x, const Exponents& exps, std::uint64_t mod) {
  std::uint64_t v = 1 % mod;
  for (std::size_t i = 0; i < exps.size(); ++i) {
    for (unsigned t = 0; t < exps[i]; ++t) v = mulmod(v, x[i], mod);
  }
  return v;
}

void check_dimension(unsigned n, std::size_t got) {
  if (got != n) {
    throw Error("dimension mismatch: expected " + std::to_string(n) + ", got " +
                std::to_string(got));
  }
}

Exponents reduce_exponents(const Field& f, std::vector<unsigned> e) {
  Exponents out(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    // x^p = x as functions on F_p.
    out[i] = static_cast<std::uint8_t>(e[i] == 0 ? 0 : (e[i] - 1) % (f.p() - 1) + 1);
  }
  return out;
}

std::vector<std::size_t> pullback_indices(const VectorSpace& space, const Field& field,
                                          const FpMatrix& m) {
  if (m.n() != space.n()) throw Error("matrix dimension does not match polynomial");
  std::vector<std::size_t> idx(space.size());
  for (std::size_t y = 0; y < space.size(); ++y) {
    idx[y] = space.index(m.apply(field, space.point(y)));
  }
  return idx;
}

}  // namespace

unsigned Monomial::weight() const noexcept {
  return std::accumulate(exps.begin(), exps.end(), 0u);
}

NonClassicalPoly::NonClassicalPoly(Field field, unsigned n)
    : field_(std::move(field)), n_(n) {}

NonClassicalPoly::NonClassicalPoly(Field field, unsigned n, PhaseValue alpha, TermMap terms)
    : field_(std::move(field)), n_(n), alpha_(field_.normalize(alpha)) {
  if (field_.p() > 255) throw Error("polynomials support p < 256");
  for (auto& [mono, c] : terms) {
    check_exponents(field_, n_, mono.exps);
    if (mono.weight() == 0) throw Error("non-constant monomial required; use alpha for constants");
    if (mono.j + 1 > field_.max_depth()) throw Error("term depth exceeds maximum phase depth");
    if (c % field_.p() != 0) terms_.emplace(mono, c % field_.p());
  }
}

bool NonClassicalPoly::is_classical_plus_constant() const noexcept {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.j == 0; });
}

unsigned NonClassicalPoly::value_depth() const noexcept {
  unsigned d = alpha_.depth;
  for (const auto& [mono, c] : terms_) d = std::max(d, mono.j + 1);
  return d;
}

DegreeDepth degree_and_depth(const NonClassicalPoly& poly) {
  DegreeDepth dd;
  for (const auto& [mono, c] : poly.terms()) {
    dd.degree = std::max(dd.degree, mono.weight() + mono.j * (poly.p() - 1));
    dd.depth = std::max(dd.depth, mono.j + 1);
  }
  return dd;
}

ClassicalPoly::ClassicalPoly(Field field, unsigned n) : field_(std::move(field)), n_(n) {}

ClassicalPoly::ClassicalPoly(Field field, unsigned n, TermMap terms)
    : field_(std::move(field)), n_(n) {
  if (field_.p() > 255) throw Error("polynomials support p < 256");
  for (auto& [exps, c] : terms) {
    check_exponents(field_, n_, exps);
    if (c % field_.p() != 0) terms_.emplace(exps, c % field_.p());
  }
}

Residue ClassicalPoly::coefficient(const Exponents& exps) const {
  auto it = terms_.find(exps);
  return it == terms_.end() ? 0 : it->second;
}

unsigned ClassicalPoly::degree() const noexcept {
  unsigned d = 0;
  for (const auto& [exps, c] : terms_) {
    d = std::max(d, std::accumulate(exps.begin(), exps.end(), 0u));
  }
  return d;
}

Residue ClassicalPoly::eval(std::span<const Residue> x) const {
  check_dimension(n_, x.size());
  std::uint64_t acc = 0;
  for (const auto& [exps, c] : terms_) {
    acc += mulmod(c, monomial_value(x, exps, field_.p()), field_.p());
  }
  return static_cast<Residue>(acc % field_.p());
}

NonClassicalPoly ClassicalPoly::to_phase() const {
  NonClassicalPoly::TermMap terms;
  PhaseValue alpha;
  for (const auto& [exps, c] : terms_) {
    if (std::all_of(exps.begin(), exps.end(), [](auto e) { return e == 0; })) {
      alpha = field_.embed(c);
    } else {
      terms.emplace(Monomial{exps, 0}, c);
    }
  }
  return NonClassicalPoly(field_, n_, alpha, std::move(terms));
}

ClassicalPoly ClassicalPoly::from_phase(const NonClassicalPoly& poly) {
  if (!poly.is_classical_plus_constant()) throw Error("polynomial has terms of depth > 1");
  TermMap terms;
  const Residue constant = poly.field().to_residue(poly.alpha());
  if (constant) terms.emplace(Exponents(poly.n(), 0), constant);
  for (const auto& [mono, c] : poly.terms()) terms.emplace(mono.exps, c);
  return ClassicalPoly(poly.field(), poly.n(), std::move(terms));
}

ClassicalPoly operator+(const ClassicalPoly& a, const ClassicalPoly& b) {
  if (!(a.field() == b.field()) || a.n() != b.n()) throw Error("polynomial shape mismatch");
  auto terms = a.terms();
  for (const auto& [exps, c] : b.terms()) terms[exps] = a.field().add(terms[exps], c);
  return ClassicalPoly(a.field(), a.n(), std::move(terms));
}

ClassicalPoly scale(const ClassicalPoly& a, Residue c) {
  ClassicalPoly::TermMap terms;
  for (const auto& [exps, v] : a.terms()) terms.emplace(exps, a.field().mul(v, c % a.p()));
  return ClassicalPoly(a.field(), a.n(), std::move(terms));
}

ClassicalPoly operator-(const ClassicalPoly& a, const ClassicalPoly& b) {
  return a + scale(b, a.field().neg(1));
}

ClassicalPoly operator*(const ClassicalPoly& a, const ClassicalPoly& b) {
  if (!(a.field() == b.field()) || a.n() != b.n()) throw Error("polynomial shape mismatch");
  const Field& f = a.field();
  ClassicalPoly::TermMap terms;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      std::vector<unsigned> sum(a.n());
      for (unsigned i = 0; i < a.n(); ++i) sum[i] = ea[i] + eb[i];
      auto& slot = terms[reduce_exponents(f, std::move(sum))];
      slot = f.add(slot, f.mul(ca, cb));
    }
  }
  return ClassicalPoly(f, a.n(), std::move(terms));
}

PhaseValue eval_nonclassical(const NonClassicalPoly& poly, std::span<const Residue> x) {
  check_dimension(poly.n(), x.size());
  const Field& f = poly.field();
  const unsigned depth = poly.value_depth();
  const std::uint64_t mod = f.modulus(depth);
  std::uint64_t acc = f.numerator_at(poly.alpha(), depth);
  for (const auto& [mono, c] : poly.terms()) {
    const std::uint64_t local = f.modulus(mono.j + 1);
    const std::uint64_t v = mulmod(c, monomial_value(x, mono.exps, local), local);
    acc = (acc + v * f.modulus(depth - mono.j - 1)) % mod;
  }
  return f.phase(acc, depth);
}

PhaseTable evaluate_table(const NonClassicalPoly& poly) {
  const Field& f = poly.field();
  const VectorSpace space(f.p(), poly.n());
  const unsigned depth = poly.value_depth();
  const std::uint64_t mod = f.modulus(depth);
  std::vector<std::uint64_t> total(space.size(), f.numerator_at(poly.alpha(), depth));
  for (unsigned j = 0; j + 1 <= depth; ++j) {
    std::vector<std::uint64_t> grid(space.size(), 0);
    bool any = false;
    for (const auto& [mono, c] : poly.terms()) {
      if (mono.j != j) continue;
      grid[index_of(space, mono.exps)] = c;
      any = true;
    }
    if (!any) continue;
    const std::uint64_t local = f.modulus(j + 1);
    axis_transform(grid, space, evaluation_matrix(f.p(), local), local);
    const std::uint64_t lift = f.modulus(depth - j - 1);
    for (std::size_t x = 0; x < space.size(); ++x) total[x] = (total[x] + grid[x] * lift) % mod;
  }
  PhaseTable table(f, poly.n());
  for (std::size_t x = 0; x < space.size(); ++x) table[x] = f.phase(total[x], depth);
  return table;
}

std::vector<Residue> evaluate_table(const ClassicalPoly& poly) {
  const VectorSpace space(poly.p(), poly.n());
  std::vector<std::uint64_t> grid(space.size(), 0);
  for (const auto& [exps, c] : poly.terms()) grid[index_of(space, exps)] = c;
  axis_transform(grid, space, evaluation_matrix(poly.p(), poly.p()), poly.p());
  return {grid.begin(), grid.end()};
}

ClassicalPoly interpolate_classical(const Field& field, unsigned n, std::span<const Residue> values) {
  const VectorSpace space(field.p(), n);
  if (values.size() != space.size()) throw Error("table length is not p^n");
  std::vector<std::uint64_t> grid(values.begin(), values.end());
  for (auto& v : grid) v %= field.p();
  axis_transform(grid, space, interpolation_matrix(field), field.p());
  ClassicalPoly::TermMap terms;
  for (std::size_t e = 0; e < grid.size(); ++e) {
    if (grid[e]) terms.emplace(exponents_of(space, e), static_cast<Residue>(grid[e]));
  }
  return ClassicalPoly(field, n, std::move(terms));
}

NonClassicalPoly canonicalize(const PhaseTable& table) {
  const Field& f = table.field();
  const VectorSpace& space = table.space();
  unsigned depth = 0;
  for (const auto& v : table.values()) depth = std::max(depth, f.normalize(v).depth);

  std::vector<std::uint64_t> num(space.size());
  for (std::size_t x = 0; x < space.size(); ++x) num[x] = f.numerator_at(f.normalize(table[x]), depth);

  const auto interp = interpolation_matrix(f);
  NonClassicalPoly::TermMap terms;
  std::uint64_t alpha_num = 0;
  // Peel one p-adic digit per layer: the residue mod p is a classical function
  // whose monomial coefficients are the terms with denominator p^layer.
  for (unsigned layer = depth; layer >= 1; --layer) {
    const std::uint64_t mod = f.modulus(layer);
    std::vector<std::uint64_t> coeffs(space.size());
    for (std::size_t x = 0; x < space.size(); ++x) coeffs[x] = num[x] % f.p();
    axis_transform(coeffs, space, interp, f.p());

    alpha_num += coeffs[0] * f.modulus(depth - layer);
    for (std::size_t e = 1; e < coeffs.size(); ++e) {
      if (coeffs[e]) {
        terms.emplace(Monomial{exponents_of(space, e), layer - 1}, static_cast<Residue>(coeffs[e]));
      }
    }
    axis_transform(coeffs, space, evaluation_matrix(f.p(), mod), mod);
    for (std::size_t x = 0; x < space.size(); ++x) {
      const std::uint64_t rest = (num[x] + mod - coeffs[x]) % mod;
      if (rest % f.p() != 0) throw Error("internal error: layer residue not divisible by p");
      num[x] = rest / f.p();
    }
  }
  return NonClassicalPoly(f, table.n(), f.phase(alpha_num, depth), std::move(terms));
}

NonClassicalPoly additive_derivative(const NonClassicalPoly& poly, std::span<const Residue> h) {
  check_dimension(poly.n(), h.size());
  const PhaseTable table = evaluate_table(poly);
  const auto shift = table.space().translation(h);
  PhaseTable diff(poly.field(), poly.n());
  for (std::size_t x = 0; x < table.size(); ++x) {
    diff[x] = poly.field().combine(table[shift[x]], table[x], -1);
  }
  return canonicalize(diff);
}

PhaseValue iterated_difference(const NonClassicalPoly& poly, std::span<const FpVector> shifts,
                               std::span<const Residue> x) {
  const Field& f = poly.field();
  const std::size_t k = shifts.size();
  if (k >= 31) throw Error("too many shifts");
  PhaseValue acc;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    FpVector point(x.begin(), x.end());
    for (std::size_t j = 0; j < k; ++j) {
      if (mask >> j & 1) point = add(f, point, shifts[j]);
    }
    const int sign = ((k - std::popcount(mask)) % 2 == 0) ? 1 : -1;
    acc = f.combine(acc, eval_nonclassical(poly, point), sign);
  }
  return acc;
}

Residue iterated_difference(const ClassicalPoly& poly, std::span<const FpVector> shifts,
                            std::span<const Residue> x) {
  const Field& f = poly.field();
  const std::size_t k = shifts.size();
  if (k >= 31) throw Error("too many shifts");
  Residue acc = 0;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    FpVector point(x.begin(), x.end());
    for (std::size_t j = 0; j < k; ++j) {
      if (mask >> j & 1) point = add(f, point, shifts[j]);
    }
    const Residue v = poly.eval(point);
    acc = ((k - std::popcount(mask)) % 2 == 0) ? f.add(acc, v) : f.sub(acc, v);
  }
  return acc;
}

NonClassicalPoly compose_linear(const NonClassicalPoly& poly, const FpMatrix& m) {
  const PhaseTable table = evaluate_table(poly);
  const auto idx = pullback_indices(table.space(), poly.field(), m);
  PhaseTable out(poly.field(), poly.n());
  for (std::size_t y = 0; y < out.size(); ++y) out[y] = table[idx[y]];
  return canonicalize(out);
}

ClassicalPoly compose_linear(const ClassicalPoly& poly, const FpMatrix& m) {
  const auto values = evaluate_table(poly);
  const VectorSpace space(poly.p(), poly.n());
  const auto idx = pullback_indices(space, poly.field(), m);
  std::vector<Residue> out(space.size());
  for (std::size_t y = 0; y < out.size(); ++y) out[y] = values[idx[y]];
  return interpolate_classical(poly.field(), poly.n(), out);
}

ComplexTable phase_function(const PhaseTable& table) {
  const Field& f = table.field();
  unsigned depth = 0;
  for (const auto& v : table.values()) depth = std::max(depth, v.depth);
  ComplexTable out(f, table.n());
  if (f.modulus(depth) <= (std::uint64_t{1} << 20)) {
    const RootTable roots(f, depth);
    for (std::size_t x = 0; x < table.size(); ++x) out[x] = roots[f.numerator_at(table[x], depth)];
  } else {
    for (std::size_t x = 0; x < table.size(); ++x) out[x] = f.to_complex(table[x]);
  }
  return out;
}

ComplexTable phase_function(const NonClassicalPoly& poly) {
  return phase_function(evaluate_table(poly));
}

ComplexTable phase_function(const ClassicalPoly& poly) {
  const auto values = evaluate_table(poly);
  ComplexTable out(poly.field(), poly.n());
  for (std::size_t x = 0; x < values.size(); ++x) out[x] = poly.field().e_p(values[x]);
  return out;
}

}  // namespace phasekit
