#include "phasekit/symmetrize.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace phasekit {

namespace {

Composition strip_zeros(const Exponents& lambda) {
  std::vector<unsigned> parts;
  for (auto v : lambda)
    if (v != 0) parts.push_back(v);
  return Composition(std::move(parts));
}

std::vector<unsigned> complement(unsigned n, const std::vector<unsigned>& subset) {
  std::vector<unsigned> out;
  for (unsigned i = 0, k = 0; i < n; ++i) {
    if (k < subset.size() && subset[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

void check_subset(unsigned n, const std::vector<unsigned>& subset) {
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= n) throw Error("vertex " + std::to_string(subset[i]) + " out of range");
    if (i > 0 && subset[i] <= subset[i - 1]) throw Error("subset must be strictly increasing");
  }
}

class ColorSearch {
 public:
  ColorSearch(const ClassicalPoly& poly, unsigned d, unsigned target, std::uint64_t budget)
      : poly_(poly), d_(d), target_(target), budget_(budget) {}

  MonochromaticSearch run() {
    dfs(0);
    result_.exhausted = !stopped_;
    return std::move(result_);
  }

 private:
  const EdgeColor& color(const std::vector<unsigned>& edge) {
    auto it = cache_.find(edge);
    if (it == cache_.end()) it = cache_.emplace(edge, edge_color(poly_, d_, edge)).first;
    return it->second;
  }

  // Every d-edge formed by v and d-1 members of the current set.
  bool consistent_with(unsigned v) {
    std::vector<unsigned> pick(d_ - 1);
    for (unsigned i = 0; i + 1 < d_; ++i) pick[i] = i;
    const unsigned size = static_cast<unsigned>(set_.size());
    std::vector<unsigned> edge(d_);
    while (true) {
      for (unsigned i = 0; i + 1 < d_; ++i) edge[i] = set_[pick[i]];
      edge[d_ - 1] = v;
      if (!(color(edge) == reference_)) return false;
      int j = static_cast<int>(d_) - 2;
      while (j >= 0 && pick[j] == size - (d_ - 1) + j) --j;
      if (j < 0) return true;
      ++pick[j];
      for (unsigned t = j + 1; t + 1 < d_; ++t) pick[t] = pick[t - 1] + 1;
    }
  }

  // Returns true once the target size has been reached.
  bool dfs(unsigned start) {
    if (set_.size() >= d_ && set_.size() > result_.largest.size()) result_.largest = set_;
    if (set_.size() == target_) {
      result_.subset = set_;
      return true;
    }
    const unsigned n = poly_.n();
    for (unsigned v = start; v < n; ++v) {
      if (n - v < target_ - set_.size()) break;
      if (result_.nodes >= budget_) {
        stopped_ = true;
        return false;
      }
      ++result_.nodes;
      bool ok = true;
      if (set_.size() + 1 == d_) {
        auto edge = set_;
        edge.push_back(v);
        const auto& c = color(edge);
        ok = c.placement_invariant();
        if (ok) reference_ = c;
      } else if (set_.size() + 1 > d_) {
        ok = consistent_with(v);
      }
      if (!ok) continue;
      set_.push_back(v);
      const bool done = dfs(v + 1);
      set_.pop_back();
      if (done || stopped_) return done;
    }
    return false;
  }

  const ClassicalPoly& poly_;
  unsigned d_;
  unsigned target_;
  std::uint64_t budget_;
  bool stopped_ = false;
  std::vector<unsigned> set_;
  EdgeColor reference_;
  std::map<std::vector<unsigned>, EdgeColor> cache_;
  MonochromaticSearch result_;
};

}  // namespace

std::vector<Exponents> lambda_set(unsigned p, unsigned d) {
  std::vector<Exponents> out;
  Exponents cur(d, 0);
  const auto rec = [&](auto&& self, unsigned pos, unsigned left) -> void {
    if (pos == d) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (unsigned v = 0; v < p && v <= left; ++v) {
      cur[pos] = static_cast<std::uint8_t>(v);
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, d);
  return out;
}

bool EdgeColor::placement_invariant() const {
  std::map<Composition, Residue> seen;
  for (const auto& [lambda, value] : values) {
    const auto [it, fresh] = seen.emplace(strip_zeros(lambda), value);
    if (!fresh && it->second != value) return false;
  }
  return true;
}

EdgeColor edge_color(const ClassicalPoly& poly, unsigned d, const std::vector<unsigned>& edge) {
  if (edge.size() != d) {
    throw Error("edge has " + std::to_string(edge.size()) + " vertices, expected " +
                std::to_string(d));
  }
  check_subset(poly.n(), edge);
  EdgeColor color;
  for (const auto& lambda : lambda_set(poly.p(), d)) {
    Exponents e(poly.n(), 0);
    for (unsigned t = 0; t < d; ++t) e[edge[t]] = lambda[t];
    color.values[lambda] = poly.coefficient(e);
  }
  return color;
}

MonochromaticSearch find_monochromatic(const ClassicalPoly& poly, unsigned d, unsigned target_m,
                                       std::uint64_t node_budget) {
  if (d < 1) throw Error("uniformity must be at least 1");
  if (poly.degree() > d) throw Error("polynomial degree exceeds d");
  if (target_m > poly.n()) throw Error("target size exceeds n");
  if (target_m < d) throw Error("target size must be at least d");
  return ColorSearch(poly, d, target_m, node_budget).run();
}

RestrictionResult restrict_decompose(const ClassicalPoly& poly, unsigned d,
                                     const std::vector<unsigned>& subset, const FpVector& outside) {
  const Field& field = poly.field();
  const unsigned n = poly.n();
  check_subset(n, subset);
  if (subset.size() < d) throw Error("subset is smaller than d");
  const auto rest = complement(n, subset);
  if (outside.size() != rest.size()) {
    throw Error("outside assignment has " + std::to_string(outside.size()) + " values, expected " +
                std::to_string(rest.size()));
  }
  for (auto v : outside)
    if (v >= field.p()) throw Error("outside assignment is not in F_p");

  RestrictionResult result{subset, outside, {}, ClassicalPoly(field, n)};
  const std::vector<unsigned> first(subset.begin(), subset.begin() + d);
  const auto color = edge_color(poly, d, first);
  for (const auto& [lambda, value] : color.values) {
    // The representative placement puts the parts first and zeros last.
    const auto alpha = strip_zeros(lambda);
    if (std::all_of(lambda.begin() + alpha.size(), lambda.end(), [](auto v) { return v == 0; })) {
      result.coeffs.emplace(alpha, value);
    }
  }

  // Substitute y into every term.
  ClassicalPoly::TermMap terms;
  for (const auto& [e, c] : poly.terms()) {
    Residue coeff = c;
    Exponents reduced = e;
    for (std::size_t t = 0; t < rest.size(); ++t) {
      coeff = field.mul(coeff, field.pow(outside[t], e[rest[t]]));
      reduced[rest[t]] = 0;
    }
    auto& slot = terms[reduced];
    slot = field.add(slot, coeff);
  }
  ClassicalPoly remainder(field, n, std::move(terms));

  const auto m = static_cast<unsigned>(subset.size());
  for (const auto& [alpha, c] : result.coeffs) {
    if (c == 0 || alpha.size() > m) continue;
    ClassicalPoly::TermMap lifted;
    const auto q = quasisym_poly(field, alpha, m);
    for (const auto& [e, v] : q.terms()) {
      Exponents full(n, 0);
      for (unsigned t = 0; t < m; ++t) full[subset[t]] = e[t];
      lifted[std::move(full)] = field.mul(v, c);
    }
    remainder = remainder - ClassicalPoly(field, n, std::move(lifted));
  }
  if (remainder.degree() >= d) {
    throw Error("remainder has degree " + std::to_string(remainder.degree()) +
                " >= d; the subset is not monochromatic");
  }
  result.remainder = std::move(remainder);
  return result;
}

OracleReport verify_decomposition(const ClassicalPoly& poly, unsigned d,
                                  const std::vector<unsigned>& subset, std::uint64_t seed,
                                  std::uint64_t exhaustive_limit, unsigned samples) {
  const Field& field = poly.field();
  const unsigned n = poly.n();
  const unsigned p = field.p();
  check_subset(n, subset);
  const auto rest = complement(n, subset);
  const auto m = static_cast<unsigned>(subset.size());
  OracleReport report{"decomposition", 0, {}};

  const VectorSpace outer(p, static_cast<unsigned>(rest.size()));
  const VectorSpace inner(p, m);
  const bool exhaustive = outer.size() <= exhaustive_limit;
  const std::uint64_t count = exhaustive ? outer.size() : samples;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, outer.size() - 1);

  for (unsigned t = 0; t < count && report.passed(); ++t) {
    const auto y = outer.point(exhaustive ? t : pick(rng));
    RestrictionResult r = [&] {
      try {
        return restrict_decompose(poly, d, subset, y);
      } catch (const Error& e) {
        report.counterexample = "y=" + format_vector(y) + ": " + e.what();
        return RestrictionResult{{}, {}, {}, ClassicalPoly(field, n)};
      }
    }();
    if (!report.passed()) break;
    FpVector x(n, 0);
    for (std::size_t j = 0; j < rest.size(); ++j) x[rest[j]] = y[j];
    FpVector xi(m);
    for (std::size_t idx = 0; idx < inner.size(); ++idx) {
      const auto point = inner.point(idx);
      for (unsigned j = 0; j < m; ++j) {
        x[subset[j]] = point[j];
        xi[j] = point[j];
      }
      Residue rhs = r.remainder.eval(x);
      for (const auto& [alpha, c] : r.coeffs) {
        rhs = field.add(rhs, field.mul(c, quasisym_eval(field, alpha, xi)));
      }
      ++report.checked;
      if (poly.eval(x) != rhs) {
        report.counterexample = "identity fails at x=" + format_vector(x);
        break;
      }
    }
  }
  return report;
}

}  // namespace phasekit
