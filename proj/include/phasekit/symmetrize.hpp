#pragma once

// Coefficient colouring of the complete d-uniform hypergraph on [n] and the
// restriction of a polynomial to a monochromatic vertex set, where its top
// homogeneous part becomes quasisymmetric.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "phasekit/poly.hpp"
#include "phasekit/quasisym.hpp"

namespace phasekit {

/// Lambda = { l in {0..p-1}^d : |l| = d }, in lexicographic order.
std::vector<Exponents> lambda_set(unsigned p, unsigned d);

/// Colour of a d-edge {j_1 < ... < j_d}: l -> coefficient of
/// x_{j_1}^{l_1} ... x_{j_d}^{l_d} in P.
struct EdgeColor {
  std::map<Exponents, Residue> values;
  /// True when the value depends only on l with its zeros removed.
  bool placement_invariant() const;
  friend bool operator==(const EdgeColor&, const EdgeColor&) = default;
};

/// `edge` is 0-based and strictly increasing with exactly d entries.
EdgeColor edge_color(const ClassicalPoly& poly, unsigned d, const std::vector<unsigned>& edge);

struct MonochromaticSearch {
  /// Lexicographically smallest subset of the requested size, if one exists.
  std::optional<std::vector<unsigned>> subset;
  /// Largest monochromatic subset met during the search (the fallback).
  std::vector<unsigned> largest;
  std::uint64_t nodes = 0;
  /// False when the node budget stopped the search early.
  bool exhausted = true;
};

/// Depth-first search over increasing vertex sequences; a vertex is appended
/// only if every new d-edge has the colour of the first edge, and that colour
/// must be placement invariant. Requires deg(P) <= d <= target_m <= n.
MonochromaticSearch find_monochromatic(const ClassicalPoly& poly, unsigned d, unsigned target_m,
                                       std::uint64_t node_budget = std::uint64_t{1} << 24);

struct RestrictionResult {
  std::vector<unsigned> subset;
  /// Assignment to the coordinates outside `subset`, in increasing order.
  FpVector outside;
  std::map<Composition, Residue> coeffs;
  /// P(x_I, y) - sum_a c(a) Q_a(x_I), written in the original n variables.
  ClassicalPoly remainder;
};

/// Reads the quasisymmetric coefficients from the shared colour of I and
/// substitutes y. Throws Error if the remainder has degree >= d.
RestrictionResult restrict_decompose(const ClassicalPoly& poly, unsigned d,
                                     const std::vector<unsigned>& subset, const FpVector& outside);

/// Checks P(x_I, y) = sum c(a) Q_a(x_I) + R_y(x_I) at every x_I with deg R_y < d,
/// for all y when p^{n-|I|} <= exhaustive_limit and `samples` random y otherwise.
OracleReport verify_decomposition(const ClassicalPoly& poly, unsigned d,
                                  const std::vector<unsigned>& subset, std::uint64_t seed,
                                  std::uint64_t exhaustive_limit = 729, unsigned samples = 100);

}  // namespace phasekit
