#pragma once

// The counterexample family sum_i |x_i|^r / p^{l+1}, elementary quasisymmetric
// polynomials, and the k-linear forms obtained from their k-th derivatives.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "phasekit/poly.hpp"

namespace phasekit {

/// d = r + (p-1)*ell with 0 < r < p.
struct DegreeSplit {
  unsigned d = 0;
  unsigned r = 0;
  unsigned ell = 0;
  friend bool operator==(const DegreeSplit&, const DegreeSplit&) = default;
};

DegreeSplit decompose_degree(unsigned d, unsigned p);

/// sum_{i<=n} |x_i|^r / p^{ell+1}, the degree-d member of the family. Any
/// d >= 1 is accepted, including ell = 0.
NonClassicalPoly family_poly(const Field& field, unsigned d, unsigned n);

struct Counterexample {
  NonClassicalPoly poly;
  DegreeSplit split;
  /// k = p+1: a classical correlate is guaranteed to exist.
  bool boundary = false;
};

/// The degree-(k-1) family member used against U^k. Requires k >= p+1 so
/// that ell >= 1.
Counterexample make_counterexample(const Field& field, unsigned k, unsigned n);

/// A tuple (a_1, ..., a_s), s >= 1, of positive parts. Parts must also be
/// below p wherever a field is involved.
class Composition {
 public:
  explicit Composition(std::vector<unsigned> parts);
  const std::vector<unsigned>& parts() const noexcept { return parts_; }
  unsigned size() const noexcept { return static_cast<unsigned>(parts_.size()); }
  unsigned weight() const noexcept;
  unsigned operator[](unsigned i) const { return parts_[i]; }
  /// Throws Error if some part is >= p.
  void check(const Field& field) const;
  /// "[2,1]"
  std::string to_string() const;
  static Composition parse(std::string_view text);
  friend bool operator==(const Composition&, const Composition&) = default;
  friend auto operator<=>(const Composition&, const Composition&) = default;

 private:
  std::vector<unsigned> parts_;
};

/// Every composition of `weight` with parts in [1, p-1], in lexicographic order.
std::vector<Composition> compositions(unsigned weight, unsigned p);

/// Q_a(x) = sum_{i_1 < ... < i_s} prod_j x_{i_j}^{a_j}.
ClassicalPoly quasisym_poly(const Field& field, const Composition& alpha, unsigned n);
/// Q_a(x) by dynamic programming over coordinates, O(n s).
Residue quasisym_eval(const Field& field, const Composition& alpha, std::span<const Residue> x);

enum class FormMode { symbolic, brute_force };

/// Delta_{h_1}..Delta_{h_k} of the degree-k family member, read in F_p.
/// Symbolic: (-1)^ell r! sum_i prod_j (h_j)_i. Brute force: inclusion-exclusion
/// on the polynomial itself.
Residue iota_form(const Field& field, const DegreeSplit& split, std::span<const FpVector> shifts,
                  FormMode mode = FormMode::symbolic);

/// Delta_{h_1}..Delta_{h_k} Q_a with k = |a|. Symbolic: the sum over
/// permutations of k and index sequences made of s blocks of equal indices
/// (block j has size a_j), strictly increasing between blocks.
Residue tau_form(const Field& field, const Composition& alpha, std::span<const FpVector> shifts,
                 FormMode mode = FormMode::symbolic);

/// The vector S(h_1..h_{k-1}) with form(h_1..h_k) = S . h_k, coordinate i read
/// off by taking h_k = e_i. `n` is needed when k = 1 (no shifts).
FpVector iota_vector(const Field& field, const DegreeSplit& split,
                     std::span<const FpVector> shifts, unsigned n,
                     FormMode mode = FormMode::symbolic);
FpVector tau_vector(const Field& field, const Composition& alpha,
                    std::span<const FpVector> shifts, unsigned n,
                    FormMode mode = FormMode::symbolic);
/// Single coordinate of the above.
Residue iota_coordinate(const Field& field, const DegreeSplit& split,
                        std::span<const FpVector> shifts, unsigned n, unsigned i,
                        FormMode mode = FormMode::symbolic);
Residue tau_coordinate(const Field& field, const Composition& alpha,
                       std::span<const FpVector> shifts, unsigned n, unsigned i,
                       FormMode mode = FormMode::symbolic);

using MultiaffineOracle = std::function<Residue(std::span<const Residue>)>;

/// Coefficient of x_1..x_r of a multiaffine L: F_p^r -> F_p, as
/// sum_{w in {0,1}^r} (-1)^{r-|w|} L(w). Before extracting, `spot_checks`
/// random lines through random points are tested for affinity in each
/// variable; a failure throws Error.
Residue multiaffine_leading_coeff(const Field& field, unsigned r, const MultiaffineOracle& oracle,
                                  std::uint64_t seed = 0, unsigned spot_checks = 16);

/// (-1)^{s-1} a_1 (k-1)! mod p.
Residue expected_leading_coeff(const Field& field, const Composition& alpha);

/// Number of copies m = p^a >= k used by the leading-coefficient probe.
unsigned replication_width(unsigned p, unsigned k);

/// Leading coefficient of z -> T_a(h_1..h_{k-1})_i where coordinates before i
/// are the given prefix (k-1 rows of equal length) and coordinate i and the
/// m-1 coordinates after it all equal z_j in row j. With m a power of p, all
/// binomials C(m, t), 0 < t < m, vanish mod p, so every tau_b(h_I) keeps its
/// prefix value while z varies, and the extracted number is the constant
/// coefficient of prod_j (h_j)_i.
Residue tau_leading_coefficient(const Field& field, const Composition& alpha,
                                std::span<const FpVector> prefix,
                                FormMode mode = FormMode::symbolic, std::uint64_t seed = 0);

/// Same probe for I_k + sum_a c_a T_a with k >= 1.
Residue combined_leading_coefficient(const Field& field, unsigned k,
                                     const std::vector<std::pair<Composition, Residue>>& mix,
                                     std::span<const FpVector> prefix,
                                     FormMode mode = FormMode::symbolic, std::uint64_t seed = 0);

/// (p-1)! == -1 mod p.
bool wilson_holds(const Field& field);

struct OracleReport {
  std::string name;
  std::uint64_t checked = 0;
  std::optional<std::string> counterexample;
  bool passed() const noexcept { return !counterexample.has_value(); }
};

/// iota and every tau_a with |a| = k, symbolic against brute force, on
/// `samples` random shift tuples. Also checks that the k-th derivatives are the
/// same at a random base point.
OracleReport verify_derivative_forms(const Field& field, unsigned k, unsigned n, unsigned samples,
                                     std::uint64_t seed);
/// Leading coefficient of every T_a, |a| = k, over `prefixes` random prefixes.
OracleReport verify_leading_coefficients(const Field& field, unsigned k, unsigned prefixes,
                                         std::uint64_t seed);
/// For k >= p+1: random mixtures I_k + sum c_a T_a have leading coefficient
/// (-1)^ell r!.
OracleReport verify_combined_leading(const Field& field, unsigned k, unsigned trials,
                                     std::uint64_t seed);

}  // namespace phasekit
