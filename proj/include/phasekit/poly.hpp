#pragma once

// Classical and non-classical polynomials on F_p^n in the canonical monomial
// basis  P(x) = alpha + sum_{e,j} c_{e,j} |x_1|^{e_1}...|x_n|^{e_n} / p^{j+1}.

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "phasekit/error.hpp"
#include "phasekit/fp.hpp"

namespace phasekit {

using Exponents = std::vector<std::uint8_t>;

/// Basis element |x|^exps / p^{j+1}. Ordered lexicographically on exps, then j.
struct Monomial {
  Exponents exps;
  unsigned j = 0;

  unsigned weight() const noexcept;
  auto operator<=>(const Monomial&) const = default;
};

/// Dense table of values over F_p^n, indexed as in VectorSpace.
template <class T>
class FunctionTable {
 public:
  FunctionTable(Field field, unsigned n)
      : field_(std::move(field)), space_(field_.p(), n), values_(space_.size()) {}
  FunctionTable(Field field, unsigned n, std::vector<T> values)
      : field_(std::move(field)), space_(field_.p(), n), values_(std::move(values)) {
    if (values_.size() != space_.size()) {
      throw Error("table length " + std::to_string(values_.size()) + " is not p^n = " +
                  std::to_string(space_.size()));
    }
  }

  const Field& field() const noexcept { return field_; }
  const VectorSpace& space() const noexcept { return space_; }
  unsigned n() const noexcept { return space_.n(); }
  std::size_t size() const noexcept { return values_.size(); }

  T& operator[](std::size_t i) { return values_[i]; }
  const T& operator[](std::size_t i) const { return values_[i]; }
  const T& at(std::span<const Residue> x) const { return values_[space_.index(x)]; }
  const std::vector<T>& values() const noexcept { return values_; }
  std::vector<T>& values() noexcept { return values_; }

 private:
  Field field_;
  VectorSpace space_;
  std::vector<T> values_;
};

using PhaseTable = FunctionTable<PhaseValue>;
using ComplexTable = FunctionTable<std::complex<double>>;

class NonClassicalPoly {
 public:
  using TermMap = std::map<Monomial, Residue>;

  NonClassicalPoly(Field field, unsigned n);
  /// Validates every term; zero coefficients are dropped.
  NonClassicalPoly(Field field, unsigned n, PhaseValue alpha, TermMap terms);

  const Field& field() const noexcept { return field_; }
  unsigned p() const noexcept { return field_.p(); }
  unsigned n() const noexcept { return n_; }
  PhaseValue alpha() const noexcept { return alpha_; }
  const TermMap& terms() const noexcept { return terms_; }

  bool is_zero() const noexcept { return alpha_.numerator == 0 && terms_.empty(); }
  /// True when every term has j = 0, i.e. P = alpha + |Q|/p for classical Q.
  bool is_classical_plus_constant() const noexcept;
  /// Depth needed to hold every value exactly (includes alpha).
  unsigned value_depth() const noexcept;

  friend bool operator==(const NonClassicalPoly&, const NonClassicalPoly&) = default;

 private:
  Field field_;
  unsigned n_;
  PhaseValue alpha_;
  TermMap terms_;
};

struct DegreeDepth {
  unsigned degree = 0;
  unsigned depth = 0;
  friend bool operator==(const DegreeDepth&, const DegreeDepth&) = default;
};

/// degree = max |exps| + j(p-1); depth = 1 + max j. The zero polynomial and
/// constants report (0, 0).
DegreeDepth degree_and_depth(const NonClassicalPoly& poly);

/// Polynomial F_p^n -> F_p with per-variable exponents < p. The all-zero
/// exponent key holds the constant term.
class ClassicalPoly {
 public:
  using TermMap = std::map<Exponents, Residue>;

  ClassicalPoly(Field field, unsigned n);
  ClassicalPoly(Field field, unsigned n, TermMap terms);

  const Field& field() const noexcept { return field_; }
  unsigned p() const noexcept { return field_.p(); }
  unsigned n() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }

  Residue coefficient(const Exponents& exps) const;
  Residue constant() const { return coefficient(Exponents(n_, 0)); }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// Total degree; 0 for constants and the zero polynomial.
  unsigned degree() const noexcept;
  Residue eval(std::span<const Residue> x) const;

  /// The phase |Q|/p as a canonical non-classical polynomial.
  NonClassicalPoly to_phase() const;
  /// Inverse of to_phase. Throws Error unless every term has j = 0 and
  /// alpha lies in U_1.
  static ClassicalPoly from_phase(const NonClassicalPoly& poly);

  friend bool operator==(const ClassicalPoly&, const ClassicalPoly&) = default;

 private:
  Field field_;
  unsigned n_;
  TermMap terms_;
};

ClassicalPoly operator+(const ClassicalPoly& a, const ClassicalPoly& b);
ClassicalPoly operator-(const ClassicalPoly& a, const ClassicalPoly& b);
ClassicalPoly operator*(const ClassicalPoly& a, const ClassicalPoly& b);
ClassicalPoly scale(const ClassicalPoly& a, Residue c);

/// Exact value at x, evaluated term by term.
PhaseValue eval_nonclassical(const NonClassicalPoly& poly, std::span<const Residue> x);

/// Full value table, computed with per-axis evaluation transforms.
PhaseTable evaluate_table(const NonClassicalPoly& poly);
std::vector<Residue> evaluate_table(const ClassicalPoly& poly);

/// Unique canonical representation of a U_D-valued table.
NonClassicalPoly canonicalize(const PhaseTable& table);

/// Classical interpolation in the monomial basis (per-variable degree < p).
ClassicalPoly interpolate_classical(const Field& field, unsigned n,
                                    std::span<const Residue> values);

/// Canonical form of x -> P(x+h) - P(x).
NonClassicalPoly additive_derivative(const NonClassicalPoly& poly, std::span<const Residue> h);

/// (Delta_{h_1}...Delta_{h_k} P)(x) from the definition, by inclusion-exclusion
/// over the 2^k corners x + sum_{j in S} h_j.
PhaseValue iterated_difference(const NonClassicalPoly& poly, std::span<const FpVector> shifts,
                               std::span<const Residue> x);
Residue iterated_difference(const ClassicalPoly& poly, std::span<const FpVector> shifts,
                            std::span<const Residue> x);

/// Canonical form of x -> P(Mx).
NonClassicalPoly compose_linear(const NonClassicalPoly& poly, const FpMatrix& m);
ClassicalPoly compose_linear(const ClassicalPoly& poly, const FpMatrix& m);

/// e(P) and e_p(Q) as complex tables.
ComplexTable phase_function(const PhaseTable& table);
ComplexTable phase_function(const NonClassicalPoly& poly);
ComplexTable phase_function(const ClassicalPoly& poly);

}  // namespace phasekit
