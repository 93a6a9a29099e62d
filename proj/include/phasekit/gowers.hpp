#pragma once

// Multiplicative derivatives, Gowers uniformity norms, correlation with
// classical phases and the F_p^n Fourier transform.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>

#include "phasekit/poly.hpp"

namespace phasekit {

enum class GowersMethod { direct_enumeration, recursive_table, phase_histogram };

std::string_view to_string(GowersMethod method);
GowersMethod parse_gowers_method(std::string_view name);

struct GowersResult {
  double norm = 0.0;
  unsigned d = 0;
  GowersMethod method = GowersMethod::recursive_table;
  /// Number of (x, h_1, ..., h_d) terms evaluated.
  std::uint64_t count = 0;
  /// Phase-histogram path only: multiplicity of each value of the iterated
  /// derivative, keyed by its numerator over p^histogram_depth.
  std::map<std::uint64_t, std::uint64_t> histogram;
  unsigned histogram_depth = 0;
};

struct GowersOptions {
  /// Forces a method; otherwise the cheapest feasible one is chosen.
  std::optional<GowersMethod> method;
  /// Cap on evaluated terms.
  std::uint64_t budget = std::uint64_t{1} << 34;
  unsigned jobs = 1;
};

/// (d_h f)(x) = f(x+h) * conj(f(x)).
ComplexTable mult_derivative(const ComplexTable& f, std::span<const Residue> h);

/// ||f||_{U^d} for a table with sup norm <= 1 (+1e-9). Uses direct
/// enumeration of all (x, h_1..h_d) on tiny inputs and the recursion
/// ||f||^{2^d} = E_h ||d_h f||_{U^{d-1}}^{2^{d-1}} otherwise.
GowersResult gowers_norm(const ComplexTable& f, unsigned d, const GowersOptions& options = {});

/// ||e(P)||_{U^d} from an exact histogram of the iterated additive derivative
/// over all (x, h_1..h_d). When deg(P) <= d the derivative is constant in x
/// and only x = 0 is enumerated.
GowersResult gowers_norm_phase(const NonClassicalPoly& poly, unsigned d,
                               const GowersOptions& options = {});

/// |E_x f(x) e_p(-Q(x))|.
double correlation(const ComplexTable& f, const ClassicalPoly& q);

/// f^(a) = E_x f(x) e_p(-a.x), as a table indexed by a.
ComplexTable fourier_fp(const ComplexTable& f);

}  // namespace phasekit
