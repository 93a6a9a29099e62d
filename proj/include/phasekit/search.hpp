#pragma once

// Correlation maximisation over classical polynomials, the vanishing
// probability of multiaffine forms, and decay curves for the counterexample
// family.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "phasekit/poly.hpp"
#include "phasekit/quasisym.hpp"

namespace phasekit {

inline constexpr std::uint64_t kDefaultSearchBudget = std::uint64_t{1} << 28;

/// Constant-free classical polynomials of degree <= d. Monomials are ordered
/// by total degree, then with x_1 most significant; candidate `index` has
/// base-p digit i equal to the coefficient of monomial i.
class ClassicalEnumeration {
 public:
  ClassicalEnumeration(Field field, unsigned n, unsigned d);
  const Field& field() const noexcept { return field_; }
  unsigned n() const noexcept { return n_; }
  unsigned d() const noexcept { return d_; }
  const std::vector<Exponents>& monomials() const noexcept { return monomials_; }
  /// p^M, or nullopt when it does not fit in 64 bits.
  std::optional<std::uint64_t> count() const noexcept { return count_; }
  ClassicalPoly at(std::uint64_t index) const;
  /// Inverse of at(); throws Error for polynomials outside the family.
  std::uint64_t index_of(const ClassicalPoly& poly) const;

 private:
  Field field_;
  unsigned n_;
  unsigned d_;
  std::vector<Exponents> monomials_;
  std::optional<std::uint64_t> count_;
};

/// Throws BudgetExceeded (carrying p^M, saturated at 2^64-1) when p^M > budget.
ClassicalEnumeration enumerate_classical(const Field& field, unsigned n, unsigned d,
                                         std::uint64_t budget = kDefaultSearchBudget);

enum class SearchMode { exhaustive, sampled };
std::string to_string(SearchMode mode);
SearchMode parse_search_mode(const std::string& text);

struct SearchOptions {
  /// Exhaustive: the largest p^M allowed. Sampled: the number of candidates.
  std::uint64_t budget = kDefaultSearchBudget;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
};

struct SearchReport {
  unsigned p = 0;
  unsigned n = 0;
  unsigned d = 0;
  SearchMode mode = SearchMode::exhaustive;
  double best_value = 0.0;
  ClassicalPoly best_poly{Field(2), 0};
  std::uint64_t candidates = 0;
  std::uint64_t seed = 0;
  friend bool operator==(const SearchReport&, const SearchReport&) = default;
};

/// max |E f e_p(-Q)| over the constant-free candidates of degree <= d. Ties go
/// to the smallest enumeration index (exhaustive) or sample number (sampled).
/// The result does not depend on opts.jobs.
SearchReport max_correlation(const ComplexTable& f, unsigned d, SearchMode mode,
                             const SearchOptions& opts = {});

/// x -> sum_S coeffs[S] prod_{i in S} x_i, with S a bitmask over r variables.
MultiaffineOracle multiaffine_form(const Field& field, unsigned r, std::vector<Residue> coeffs);

struct ZeroProbOptions {
  /// Unset: exhaustive when p^r <= 2^24.
  std::optional<SearchMode> mode;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
};

struct ZeroProbResult {
  unsigned p = 0;
  unsigned r = 0;
  SearchMode mode = SearchMode::exhaustive;
  double probability = 0.0;
  /// Zero for exact results.
  double std_error = 0.0;
  /// 1 - (1 - 1/p)^r.
  double bound = 0.0;
  std::uint64_t zeros = 0;
  std::uint64_t evaluated = 0;
  Residue leading = 0;
  std::uint64_t seed = 0;
};

/// Pr[L(x) = 0] for x uniform in F_p^r. Throws Error if L fails the
/// multiaffinity spot check or has zero leading coefficient.
ZeroProbResult zero_prob_experiment(const Field& field, unsigned r, const MultiaffineOracle& oracle,
                                    const ZeroProbOptions& opts = {});

struct DecayRow {
  unsigned n = 0;
  SearchMode mode = SearchMode::exhaustive;
  double best_value = 0.0;
  std::uint64_t candidates = 0;
  std::uint64_t seed = 0;
  ClassicalPoly best_poly{Field(2), 0};
};

struct DecayCurve {
  unsigned p = 0;
  unsigned k = 0;
  unsigned d = 0;
  /// k = p+1: a classical correlate is guaranteed, no decay is expected.
  bool boundary = false;
  bool control = false;
  std::vector<DecayRow> rows;
};

struct DecayOptions {
  /// Unset: k - 1.
  std::optional<unsigned> d;
  /// Rows with p^M above the budget are sampled with `budget` candidates.
  std::uint64_t budget = kDefaultSearchBudget;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  /// Replace the family by e_p of a random classical polynomial of degree <= d.
  bool control = false;
};

/// One row per n in [n_lo, n_hi] for f = e(f_n) with f_n of degree k-1.
/// Requires k >= p+1.
DecayCurve decay_curve(const Field& field, unsigned k, unsigned n_lo, unsigned n_hi,
                       const DecayOptions& opts = {});

/// Columns n,p,k,d,mode,best_value,candidates,seed with a header line.
std::string decay_csv(const DecayCurve& curve);

}  // namespace phasekit
