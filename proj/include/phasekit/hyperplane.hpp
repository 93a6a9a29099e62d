#pragma once

// Polynomials of degree <= p agree with a classical polynomial (up to a
// constant) on a hyperplane; from that, a classical correlate losing at most
// a factor sqrt(p).

#include <optional>
#include <vector>

#include "phasekit/poly.hpp"

namespace phasekit {

struct HyperplaneSplit {
  /// Covector c: the depth-2 linear coefficients of P. Zero if P is
  /// classical plus a constant.
  FpVector covector;
  /// B with y = Bx; the first row is c (or e_1 when c = 0), so the hyperplane
  /// c.x = 0 becomes y_1 = 0.
  FpMatrix basis_change;
  PhaseValue alpha;
  /// P(x) = alpha + |Q(x)|/p whenever c.x = 0.
  ClassicalPoly q;
  /// Linear correction chosen by the extraction step.
  std::optional<Residue> a;
};

/// Requires deg(P) <= p. The agreement on the hyperplane is checked at every
/// point when p^{n-1} <= 10^6; a failure throws Error.
HyperplaneSplit hyperplane_restriction(const NonClassicalPoly& poly);

struct CorrelateExtraction {
  HyperplaneSplit split;
  /// Q + a (c.x) in the original coordinates.
  ClassicalPoly q_total;
  /// |E f e_p(-Q_total)|, computed directly.
  double corr = 0.0;
  /// |E f e(-P)|.
  double epsilon = 0.0;
  /// |g^(a)| for a = 0..p-1, where g(y_1) = E_{y'} f(My) e_p(-Q~(y)).
  std::vector<double> slice_fourier;
};

/// corr >= epsilon / sqrt(p) by Cauchy-Schwarz and Parseval on g.
CorrelateExtraction extract_classical_correlate(const ComplexTable& f, const NonClassicalPoly& poly);

}  // namespace phasekit
