#include "phasekit/quasisym.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <numeric>
#include <random>

namespace phasekit {

namespace {

constexpr unsigned kMaxSymbolicOrder = 9;

unsigned check_shifts(std::span<const FpVector> shifts, std::optional<unsigned> n = std::nullopt) {
  if (shifts.empty()) {
    if (!n) throw Error("empty shift tuple");
    return *n;
  }
  const auto dim = static_cast<unsigned>(shifts[0].size());
  for (const auto& h : shifts) {
    if (h.size() != dim) throw Error("shift vectors have different dimensions");
  }
  if (n && *n != dim) throw Error("shift dimension does not match n");
  return dim;
}

Residue sign_power(const Field& field, unsigned e) { return e % 2 == 0 ? 1 : field.neg(1); }

std::string describe(std::span<const FpVector> shifts) {
  std::string out = "(";
  for (std::size_t j = 0; j < shifts.size(); ++j) {
    if (j) out += "),(";
    out += format_vector(shifts[j]);
  }
  return out + ")";
}

std::vector<FpVector> with_basis_vector(std::span<const FpVector> shifts, unsigned n, unsigned i) {
  std::vector<FpVector> out(shifts.begin(), shifts.end());
  FpVector e(n, 0);
  e.at(i) = 1;
  out.push_back(std::move(e));
  return out;
}

// Symbolic tau: for each permutation, the sum over block-constant,
// block-increasing index sequences factorizes across blocks, so it is
// accumulated left to right over coordinates.
Residue tau_symbolic(const Field& field, const Composition& alpha, std::span<const FpVector> shifts,
                     unsigned n) {
  const unsigned k = alpha.weight();
  const unsigned s = alpha.size();
  if (k > kMaxSymbolicOrder) throw Error("symbolic tau is limited to weight 9");
  std::vector<unsigned> block_of(k);
  for (unsigned b = 0, q = 0; b < s; ++b)
    for (unsigned t = 0; t < alpha[b]; ++t) block_of[q++] = b;

  std::vector<unsigned> perm(k);
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<Residue> factor(static_cast<std::size_t>(s) * n);
  std::vector<Residue> prefix(s + 1);
  Residue total = 0;
  do {
    // factor[b][c] = prod over shifts t whose slot perm[t] lies in block b.
    std::fill(factor.begin(), factor.end(), 1);
    for (unsigned t = 0; t < k; ++t) {
      const unsigned b = block_of[perm[t]];
      for (unsigned c = 0; c < n; ++c)
        factor[b * n + c] = field.mul(factor[b * n + c], shifts[t][c]);
    }
    // prefix[b] = sum over placements of blocks 0..b-1 in coordinates seen so far.
    std::fill(prefix.begin(), prefix.end(), 0);
    prefix[0] = 1;
    for (unsigned c = 0; c < n; ++c) {
      for (unsigned b = s; b >= 1; --b) {
        prefix[b] = field.add(prefix[b], field.mul(prefix[b - 1], factor[(b - 1) * n + c]));
      }
    }
    total = field.add(total, prefix[s]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

std::vector<FpVector> replicated(std::span<const FpVector> prefix, std::span<const Residue> z,
                                 unsigned m) {
  std::vector<FpVector> h;
  for (std::size_t j = 0; j < z.size(); ++j) {
    FpVector row(prefix.empty() ? FpVector{} : prefix[j]);
    row.insert(row.end(), m, z[j]);
    h.push_back(std::move(row));
  }
  return h;
}

unsigned prefix_length(std::span<const FpVector> prefix, unsigned rows) {
  if (prefix.size() != rows) {
    throw Error("prefix must have one row per shift (" + std::to_string(rows) + ")");
  }
  return rows == 0 ? 0 : check_shifts(prefix);
}

std::vector<FpVector> random_prefix(std::mt19937_64& rng, unsigned p, unsigned rows,
                                    unsigned max_len) {
  const unsigned len = std::uniform_int_distribution<unsigned>(0, max_len)(rng);
  std::uniform_int_distribution<unsigned> digit(0, p - 1);
  std::vector<FpVector> prefix(rows, FpVector(len));
  for (auto& row : prefix)
    for (auto& v : row) v = digit(rng);
  return prefix;
}

}  // namespace

DegreeSplit decompose_degree(unsigned d, unsigned p) {
  if (d < 1) throw Error("degree must be at least 1");
  if (!is_prime(p)) throw Error(std::to_string(p) + " is not prime");
  const unsigned r = (d - 1) % (p - 1) + 1;
  return {d, r, (d - r) / (p - 1)};
}

NonClassicalPoly family_poly(const Field& field, unsigned d, unsigned n) {
  const auto split = decompose_degree(d, field.p());
  NonClassicalPoly::TermMap terms;
  for (unsigned i = 0; i < n; ++i) {
    Exponents e(n, 0);
    e[i] = static_cast<std::uint8_t>(split.r);
    terms[Monomial{std::move(e), split.ell}] = 1;
  }
  return NonClassicalPoly(field, n, {}, std::move(terms));
}

Counterexample make_counterexample(const Field& field, unsigned k, unsigned n) {
  if (k <= field.p()) {
    throw Error("the family needs k >= p+1 (k = " + std::to_string(k) +
                ", p = " + std::to_string(field.p()) + ")");
  }
  if (n < 1) throw Error("n must be at least 1");
  return {family_poly(field, k - 1, n), decompose_degree(k - 1, field.p()), k == field.p() + 1};
}

Composition::Composition(std::vector<unsigned> parts) : parts_(std::move(parts)) {
  if (parts_.empty()) throw Error("a composition needs at least one part");
  for (unsigned a : parts_) {
    if (a == 0) throw Error("composition parts must be positive");
  }
}

unsigned Composition::weight() const noexcept {
  return std::accumulate(parts_.begin(), parts_.end(), 0u);
}

void Composition::check(const Field& field) const {
  for (unsigned a : parts_) {
    if (a >= field.p()) {
      throw Error("composition " + to_string() + " has a part >= p = " + std::to_string(field.p()));
    }
  }
}

std::string Composition::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts_[i]);
  }
  return out + "]";
}

Composition Composition::parse(std::string_view text) {
  const auto bad = [&] { return Error("malformed composition '" + std::string(text) + "'"); };
  auto strip = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  auto body = strip(text);
  if (body.size() < 2 || body.front() != '[' || body.back() != ']') throw bad();
  body = body.substr(1, body.size() - 2);
  std::vector<unsigned> parts;
  while (true) {
    const auto comma = body.find(',');
    const auto item = strip(body.substr(0, comma));
    unsigned v = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || ptr != item.data() + item.size() || item.empty()) throw bad();
    parts.push_back(v);
    if (comma == std::string_view::npos) break;
    body.remove_prefix(comma + 1);
  }
  return Composition(std::move(parts));
}

std::vector<Composition> compositions(unsigned weight, unsigned p) {
  std::vector<Composition> out;
  std::vector<unsigned> parts;
  const auto rec = [&](auto&& self, unsigned left) -> void {
    if (left == 0) {
      if (!parts.empty()) out.emplace_back(parts);
      return;
    }
    for (unsigned a = 1; a < p && a <= left; ++a) {
      parts.push_back(a);
      self(self, left - a);
      parts.pop_back();
    }
  };
  rec(rec, weight);
  return out;
}

ClassicalPoly quasisym_poly(const Field& field, const Composition& alpha, unsigned n) {
  alpha.check(field);
  const unsigned s = alpha.size();
  ClassicalPoly::TermMap terms;
  if (s > n) return ClassicalPoly(field, n);
  std::vector<unsigned> idx(s);
  std::iota(idx.begin(), idx.end(), 0u);
  while (true) {
    Exponents e(n, 0);
    for (unsigned j = 0; j < s; ++j) e[idx[j]] = static_cast<std::uint8_t>(alpha[j]);
    terms[std::move(e)] = 1;
    // Next increasing tuple.
    int j = static_cast<int>(s) - 1;
    while (j >= 0 && idx[j] == n - s + j) --j;
    if (j < 0) break;
    ++idx[j];
    for (unsigned t = j + 1; t < s; ++t) idx[t] = idx[t - 1] + 1;
  }
  return ClassicalPoly(field, n, std::move(terms));
}

Residue quasisym_eval(const Field& field, const Composition& alpha, std::span<const Residue> x) {
  alpha.check(field);
  const unsigned s = alpha.size();
  std::vector<Residue> dp(s + 1, 0);
  dp[0] = 1;
  for (Residue v : x) {
    for (unsigned j = s; j >= 1; --j) {
      dp[j] = field.add(dp[j], field.mul(dp[j - 1], field.pow(v, alpha[j - 1])));
    }
  }
  return dp[s];
}

Residue iota_form(const Field& field, const DegreeSplit& split, std::span<const FpVector> shifts,
                  FormMode mode) {
  if (shifts.size() != split.d) {
    throw Error("iota_" + std::to_string(split.d) + " takes " + std::to_string(split.d) +
                " shifts, got " + std::to_string(shifts.size()));
  }
  const unsigned n = check_shifts(shifts);
  if (mode == FormMode::brute_force) {
    const FpVector origin(n, 0);
    const auto value = iterated_difference(family_poly(field, split.d, n), shifts, origin);
    return field.to_residue(value);
  }
  Residue sum = 0;
  for (unsigned i = 0; i < n; ++i) {
    Residue prod = 1;
    for (const auto& h : shifts) prod = field.mul(prod, h[i]);
    sum = field.add(sum, prod);
  }
  return field.mul(field.mul(sign_power(field, split.ell), field.factorial(split.r)), sum);
}

Residue tau_form(const Field& field, const Composition& alpha, std::span<const FpVector> shifts,
                 FormMode mode) {
  alpha.check(field);
  if (shifts.size() != alpha.weight()) {
    throw Error("tau_" + alpha.to_string() + " takes " + std::to_string(alpha.weight()) +
                " shifts, got " + std::to_string(shifts.size()));
  }
  const unsigned n = check_shifts(shifts);
  if (mode == FormMode::brute_force) {
    const FpVector origin(n, 0);
    return iterated_difference(quasisym_poly(field, alpha, n), shifts, origin);
  }
  return tau_symbolic(field, alpha, shifts, n);
}

Residue iota_coordinate(const Field& field, const DegreeSplit& split,
                        std::span<const FpVector> shifts, unsigned n, unsigned i, FormMode mode) {
  check_shifts(shifts, n);
  if (i >= n) throw Error("coordinate out of range");
  return iota_form(field, split, with_basis_vector(shifts, n, i), mode);
}

Residue tau_coordinate(const Field& field, const Composition& alpha,
                       std::span<const FpVector> shifts, unsigned n, unsigned i, FormMode mode) {
  check_shifts(shifts, n);
  if (i >= n) throw Error("coordinate out of range");
  return tau_form(field, alpha, with_basis_vector(shifts, n, i), mode);
}

FpVector iota_vector(const Field& field, const DegreeSplit& split,
                     std::span<const FpVector> shifts, unsigned n, FormMode mode) {
  FpVector out(n);
  for (unsigned i = 0; i < n; ++i) out[i] = iota_coordinate(field, split, shifts, n, i, mode);
  return out;
}

FpVector tau_vector(const Field& field, const Composition& alpha,
                    std::span<const FpVector> shifts, unsigned n, FormMode mode) {
  FpVector out(n);
  for (unsigned i = 0; i < n; ++i) out[i] = tau_coordinate(field, alpha, shifts, n, i, mode);
  return out;
}

Residue multiaffine_leading_coeff(const Field& field, unsigned r, const MultiaffineOracle& oracle,
                                  std::uint64_t seed, unsigned spot_checks) {
  if (r > 24) throw Error("too many variables for leading-coefficient extraction");
  const unsigned p = field.p();
  std::vector<Residue> z(r);
  if (r > 0 && p > 2) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> digit(0, p - 1), var(0, r - 1);
    for (unsigned c = 0; c < spot_checks; ++c) {
      for (auto& v : z) v = digit(rng);
      const unsigned j = var(rng);
      z[j] = 0;
      const Residue v0 = oracle(z);
      z[j] = 1;
      const Residue slope = field.sub(oracle(z), v0);
      for (Residue t = 2; t < p; ++t) {
        z[j] = t;
        if (oracle(z) != field.add(v0, field.mul(t, slope))) {
          throw Error("function is not affine in variable " + std::to_string(j + 1));
        }
      }
    }
  }
  Residue total = 0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << r); ++w) {
    for (unsigned j = 0; j < r; ++j) z[j] = (w >> j) & 1;
    const Residue v = oracle(z);
    const bool negative = (r - static_cast<unsigned>(std::popcount(w))) % 2 == 1;
    total = negative ? field.sub(total, v) : field.add(total, v);
  }
  return total;
}

Residue expected_leading_coeff(const Field& field, const Composition& alpha) {
  const Residue a1 = field.reduce(alpha[0]);
  const Residue base = field.mul(a1, field.factorial(alpha.weight() - 1));
  return field.mul(sign_power(field, alpha.size() - 1), base);
}

unsigned replication_width(unsigned p, unsigned k) {
  unsigned m = 1;
  while (m < k) m *= p;
  return m;
}

Residue tau_leading_coefficient(const Field& field, const Composition& alpha,
                                std::span<const FpVector> prefix, FormMode mode,
                                std::uint64_t seed) {
  alpha.check(field);
  const unsigned k = alpha.weight();
  const unsigned len = prefix_length(prefix, k - 1);
  const unsigned m = replication_width(field.p(), k);
  const unsigned n = len + m;
  return multiaffine_leading_coeff(
      field, k - 1,
      [&](std::span<const Residue> z) {
        return tau_coordinate(field, alpha, replicated(prefix, z, m), n, len, mode);
      },
      seed);
}

Residue combined_leading_coefficient(const Field& field, unsigned k,
                                     const std::vector<std::pair<Composition, Residue>>& mix,
                                     std::span<const FpVector> prefix, FormMode mode,
                                     std::uint64_t seed) {
  const auto split = decompose_degree(k, field.p());
  for (const auto& [alpha, c] : mix) {
    alpha.check(field);
    if (alpha.weight() != k) throw Error("composition " + alpha.to_string() + " has wrong weight");
  }
  const unsigned len = prefix_length(prefix, k - 1);
  const unsigned m = replication_width(field.p(), k);
  const unsigned n = len + m;
  return multiaffine_leading_coeff(
      field, k - 1,
      [&](std::span<const Residue> z) {
        const auto h = replicated(prefix, z, m);
        Residue v = iota_coordinate(field, split, h, n, len, mode);
        for (const auto& [alpha, c] : mix) {
          v = field.add(v, field.mul(c, tau_coordinate(field, alpha, h, n, len, mode)));
        }
        return v;
      },
      seed);
}

bool wilson_holds(const Field& field) {
  return field.factorial(field.p() - 1) == field.neg(1);
}

OracleReport verify_derivative_forms(const Field& field, unsigned k, unsigned n, unsigned samples,
                                     std::uint64_t seed) {
  OracleReport report{"derivative forms k=" + std::to_string(k) + " n=" + std::to_string(n), 0, {}};
  const auto split = decompose_degree(k, field.p());
  const auto comps = compositions(k, field.p());
  const auto iota_poly = family_poly(field, k, n);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> digit(0, field.p() - 1);
  const auto random_point = [&] {
    FpVector v(n);
    for (auto& x : v) x = digit(rng);
    return v;
  };
  for (unsigned trial = 0; trial < samples && report.passed(); ++trial) {
    std::vector<FpVector> h(k);
    for (auto& v : h) v = random_point();
    const auto x = random_point();

    const Residue sym = iota_form(field, split, h, FormMode::symbolic);
    const Residue brute = iota_form(field, split, h, FormMode::brute_force);
    const auto elsewhere = iterated_difference(iota_poly, h, x);
    ++report.checked;
    if (sym != brute || elsewhere != field.embed(brute)) {
      report.counterexample = "iota h=" + describe(h) + " symbolic=" + std::to_string(sym) +
                              " brute=" + std::to_string(brute);
      break;
    }
    for (const auto& alpha : comps) {
      const Residue ts = tau_form(field, alpha, h, FormMode::symbolic);
      const Residue tb = tau_form(field, alpha, h, FormMode::brute_force);
      const Residue tx = iterated_difference(quasisym_poly(field, alpha, n), h, x);
      ++report.checked;
      if (ts != tb || tx != tb) {
        report.counterexample = "tau" + alpha.to_string() + " h=" + describe(h) +
                                " symbolic=" + std::to_string(ts) +
                                " brute=" + std::to_string(tb);
        break;
      }
    }
  }
  return report;
}

OracleReport verify_leading_coefficients(const Field& field, unsigned k, unsigned prefixes,
                                         std::uint64_t seed) {
  OracleReport report{"leading coefficient k=" + std::to_string(k), 0, {}};
  std::mt19937_64 rng(seed);
  for (const auto& alpha : compositions(k, field.p())) {
    const Residue expected = expected_leading_coeff(field, alpha);
    for (unsigned t = 0; t < prefixes; ++t) {
      const auto prefix = random_prefix(rng, field.p(), k - 1, 3);
      // The brute-force path is slower; it cross-checks the first prefix only.
      const auto mode = t == 0 ? FormMode::brute_force : FormMode::symbolic;
      const Residue got = tau_leading_coefficient(field, alpha, prefix, mode, rng());
      ++report.checked;
      if (got != expected) {
        report.counterexample = "T" + alpha.to_string() + " prefix=" + describe(prefix) +
                                " got=" + std::to_string(got) +
                                " expected=" + std::to_string(expected);
        return report;
      }
    }
  }
  return report;
}

OracleReport verify_combined_leading(const Field& field, unsigned k, unsigned trials,
                                     std::uint64_t seed) {
  if (k < field.p() + 1) throw Error("combined leading coefficient check needs k >= p+1");
  OracleReport report{"combined leading coefficient k=" + std::to_string(k), 0, {}};
  const auto split = decompose_degree(k, field.p());
  const Residue expected = field.mul(sign_power(field, split.ell), field.factorial(split.r));
  const auto comps = compositions(k, field.p());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned> digit(0, field.p() - 1);
  for (unsigned t = 0; t < trials; ++t) {
    std::vector<std::pair<Composition, Residue>> mix;
    for (const auto& alpha : comps) mix.emplace_back(alpha, digit(rng));
    const auto prefix = random_prefix(rng, field.p(), k - 1, 2);
    const Residue got = combined_leading_coefficient(field, k, mix, prefix, FormMode::symbolic, rng());
    ++report.checked;
    if (got != expected) {
      report.counterexample = "prefix=" + describe(prefix) + " got=" + std::to_string(got) +
                              " expected=" + std::to_string(expected);
      break;
    }
  }
  return report;
}

}  // namespace phasekit
