#include "phasekit/search.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "phasekit/parallel.hpp"

namespace phasekit {

namespace {

constexpr double kBoundTolerance = 1e-9;
constexpr std::uint64_t kSampleBlock = 4096;
constexpr std::uint64_t kExhaustiveZeroProb = std::uint64_t{1} << 24;

unsigned total_degree(const Exponents& e) {
  unsigned w = 0;
  for (auto v : e) w += v;
  return w;
}

std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
  return std::mt19937_64(seq);
}

// Best candidate of a block. `key` is the enumeration index or the sample
// number; larger value wins, then the smaller key.
struct Best {
  double value = -1.0;
  std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
  std::vector<Residue> coeffs;

  bool beats(double v, std::uint64_t k) const { return v > value || (v == value && k < key); }
  void merge(const Best& other) {
    if (beats(other.value, other.key)) *this = other;
  }
};

// |E f e_p(-Q)| from the table of Q values.
class TableEvaluator {
 public:
  TableEvaluator(const ComplexTable& f, const std::vector<Exponents>& monomials) : f_(f) {
    const Field& field = f.field();
    const auto& space = f.space();
    for (Residue v = 0; v < field.p(); ++v) roots_.push_back(field.e_p(field.neg(v)));
    for (const auto& e : monomials) {
      std::vector<std::uint8_t> table(space.size());
      for (std::size_t x = 0; x < space.size(); ++x) {
        const auto pt = space.point(x);
        Residue v = 1;
        for (unsigned i = 0; i < pt.size(); ++i) v = field.mul(v, field.pow(pt[i], e[i]));
        table[x] = static_cast<std::uint8_t>(v);
      }
      tables_.push_back(std::move(table));
    }
  }

  std::size_t size() const noexcept { return f_.size(); }

  void add(std::vector<std::uint8_t>& q, std::size_t monomial, Residue c) const {
    const unsigned p = f_.field().p();
    const auto& t = tables_[monomial];
    for (std::size_t x = 0; x < q.size(); ++x) q[x] = static_cast<std::uint8_t>((q[x] + c * t[x]) % p);
  }

  double value(const std::vector<std::uint8_t>& q) const {
    std::complex<double> s = 0;
    for (std::size_t x = 0; x < q.size(); ++x) s += f_[x] * roots_[q[x]];
    return std::abs(s) / static_cast<double>(q.size());
  }

 private:
  const ComplexTable& f_;
  std::vector<std::complex<double>> roots_;
  std::vector<std::vector<std::uint8_t>> tables_;
};

// p = 2 and n <= 6: a candidate is a 64-bit truth table T and
// E f (-1)^Q = (F - 2 sum_{T(x)=1} f(x)) / N, with the inner sum read from
// one 256-entry table per byte of T.
class BitEvaluator {
 public:
  static bool applies(const ComplexTable& f) { return f.field().p() == 2 && f.size() <= 64; }

  BitEvaluator(const ComplexTable& f, const std::vector<Exponents>& monomials) : n_(f.size()) {
    const auto& space = f.space();
    for (const auto& e : monomials) {
      std::uint64_t word = 0;
      for (std::size_t x = 0; x < n_; ++x) {
        const auto pt = space.point(x);
        bool one = true;
        for (unsigned i = 0; i < pt.size(); ++i)
          if (e[i] && !pt[i]) one = false;
        if (one) word |= std::uint64_t{1} << x;
      }
      words_.push_back(word);
    }
    for (std::size_t x = 0; x < n_; ++x) total_ += f[x];
    chunks_.resize((n_ + 7) / 8);
    for (std::size_t c = 0; c < chunks_.size(); ++c) {
      for (unsigned mask = 0; mask < 256; ++mask) {
        std::complex<double> s = 0;
        for (unsigned b = 0; b < 8; ++b)
          if ((mask >> b & 1) && 8 * c + b < n_) s += f[8 * c + b];
        chunks_[c][mask] = s;
      }
    }
  }

  std::uint64_t word(std::size_t monomial) const { return words_[monomial]; }

  std::uint64_t table_of(std::uint64_t coeff_bits) const {
    std::uint64_t t = 0;
    for (std::size_t j = 0; coeff_bits; ++j, coeff_bits >>= 1)
      if (coeff_bits & 1) t ^= words_[j];
    return t;
  }

  double value(std::uint64_t t) const {
    std::complex<double> s = 0;
    for (std::size_t c = 0; c < chunks_.size(); ++c) s += chunks_[c][(t >> (8 * c)) & 0xff];
    return std::abs(total_ - 2.0 * s) / static_cast<double>(n_);
  }

 private:
  std::size_t n_;
  std::vector<std::uint64_t> words_;
  std::complex<double> total_ = 0;
  std::vector<std::array<std::complex<double>, 256>> chunks_;
};

std::vector<Residue> bits_to_coeffs(std::uint64_t bits, std::size_t m) {
  std::vector<Residue> c(m);
  for (std::size_t j = 0; j < m; ++j) c[j] = static_cast<Residue>(bits >> j & 1);
  return c;
}

ClassicalPoly poly_from(const Field& field, unsigned n, const std::vector<Exponents>& monomials,
                        const std::vector<Residue>& coeffs) {
  ClassicalPoly::TermMap terms;
  for (std::size_t j = 0; j < monomials.size(); ++j)
    if (coeffs[j]) terms[monomials[j]] = coeffs[j];
  return ClassicalPoly(field, n, std::move(terms));
}

// Gray order: step t visits the candidate whose digits are
// g_i = t_i - t_{i+1} mod p; consecutive steps change one digit by +1.
Best exhaustive_bits(const BitEvaluator& ev, std::size_t m, std::uint64_t lo, std::uint64_t hi) {
  Best best;
  std::uint64_t t = lo;
  std::uint64_t g = t ^ (t >> 1);
  std::uint64_t table = ev.table_of(g);
  std::uint64_t best_g = 0;
  while (true) {
    const double v = ev.value(table);
    if (best.beats(v, g)) {
      best.value = v;
      best.key = g;
      best_g = g;
    }
    if (++t == hi) break;
    const auto j = static_cast<unsigned>(std::countr_zero(t));
    table ^= ev.word(j);
    g ^= std::uint64_t{1} << j;
  }
  best.coeffs = bits_to_coeffs(best_g, m);
  return best;
}

Best exhaustive_table(const TableEvaluator& ev, unsigned p, std::size_t m, std::uint64_t lo,
                      std::uint64_t hi) {
  Best best;
  std::vector<Residue> t(m), g(m);
  std::vector<std::uint64_t> power(m);
  for (std::size_t i = 0; i < m; ++i) power[i] = i == 0 ? 1 : power[i - 1] * p;
  std::uint64_t rest = lo;
  for (std::size_t i = 0; i < m; ++i) {
    t[i] = static_cast<Residue>(rest % p);
    rest /= p;
  }
  std::vector<std::uint8_t> q(ev.size(), 0);
  std::uint64_t index = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const Residue next = i + 1 < m ? t[i + 1] : 0;
    g[i] = (t[i] + p - next) % p;
    index += g[i] * power[i];
    if (g[i]) ev.add(q, i, g[i]);
  }
  for (std::uint64_t step = lo;;) {
    const double v = ev.value(q);
    if (best.beats(v, index)) {
      best.value = v;
      best.key = index;
      best.coeffs = g;
    }
    if (++step == hi) break;
    std::size_t j = 0;
    while (t[j] == p - 1) t[j++] = 0;
    ++t[j];
    if (g[j] == p - 1) {
      g[j] = 0;
      index -= (p - 1) * power[j];
    } else {
      ++g[j];
      index += power[j];
    }
    ev.add(q, j, 1);
  }
  return best;
}

void check_bounded(const ComplexTable& f) {
  for (const auto& v : f.values()) {
    if (std::abs(v) > 1.0 + kBoundTolerance) throw Error("input table is not 1-bounded");
  }
}

std::uint64_t saturating_pow(unsigned p, std::size_t m) {
  std::uint64_t out = 1;
  for (std::size_t i = 0; i < m; ++i) {
    if (out > std::numeric_limits<std::uint64_t>::max() / p) return std::numeric_limits<std::uint64_t>::max();
    out *= p;
  }
  return out;
}

}  // namespace

ClassicalEnumeration::ClassicalEnumeration(Field field, unsigned n, unsigned d)
    : field_(std::move(field)), n_(n), d_(d) {
  const VectorSpace space(field_.p(), n);
  for (std::size_t idx = 1; idx < space.size(); ++idx) {
    const auto x = space.point(idx);
    Exponents e(x.begin(), x.end());
    if (total_degree(e) <= d) monomials_.push_back(std::move(e));
  }
  std::sort(monomials_.begin(), monomials_.end(), [](const Exponents& a, const Exponents& b) {
    const unsigned da = total_degree(a), db = total_degree(b);
    return da != db ? da < db : a > b;
  });
  const auto c = saturating_pow(field_.p(), monomials_.size());
  if (c != std::numeric_limits<std::uint64_t>::max()) count_ = c;
}

ClassicalPoly ClassicalEnumeration::at(std::uint64_t index) const {
  if (count_ && index >= *count_) throw Error("candidate index out of range");
  std::vector<Residue> coeffs(monomials_.size());
  for (auto& c : coeffs) {
    c = static_cast<Residue>(index % field_.p());
    index /= field_.p();
  }
  return poly_from(field_, n_, monomials_, coeffs);
}

std::uint64_t ClassicalEnumeration::index_of(const ClassicalPoly& poly) const {
  if (poly.n() != n_ || poly.p() != field_.p()) throw Error("polynomial lives on a different space");
  if (poly.constant() != 0 || poly.degree() > d_) throw Error("polynomial is not a candidate");
  if (!count_) throw Error("candidate indices do not fit in 64 bits");
  std::uint64_t index = 0;
  for (std::size_t j = monomials_.size(); j-- > 0;) index = index * field_.p() + poly.coefficient(monomials_[j]);
  return index;
}

ClassicalEnumeration enumerate_classical(const Field& field, unsigned n, unsigned d,
                                         std::uint64_t budget) {
  ClassicalEnumeration e(field, n, d);
  const auto required = e.count().value_or(std::numeric_limits<std::uint64_t>::max());
  if (required > budget) {
    throw BudgetExceeded("enumerating " + std::to_string(field.p()) + "^" +
                             std::to_string(e.monomials().size()) + " candidates exceeds budget",
                         required, budget);
  }
  return e;
}

std::string to_string(SearchMode mode) {
  return mode == SearchMode::exhaustive ? "exhaustive" : "sampled";
}

SearchMode parse_search_mode(const std::string& text) {
  if (text == "exhaustive") return SearchMode::exhaustive;
  if (text == "sampled") return SearchMode::sampled;
  throw Error("unknown search mode '" + text + "'");
}

SearchReport max_correlation(const ComplexTable& f, unsigned d, SearchMode mode,
                             const SearchOptions& opts) {
  check_bounded(f);
  const Field& field = f.field();
  const unsigned p = field.p();
  const unsigned jobs = opts.jobs == 0 ? default_jobs() : opts.jobs;
  const ClassicalEnumeration en = mode == SearchMode::exhaustive
                                      ? enumerate_classical(field, f.n(), d, opts.budget)
                                      : ClassicalEnumeration(field, f.n(), d);
  const auto& monomials = en.monomials();
  const std::size_t m = monomials.size();
  const bool bits = BitEvaluator::applies(f);
  std::optional<BitEvaluator> bit_ev;
  std::optional<TableEvaluator> table_ev;
  if (bits) {
    bit_ev.emplace(f, monomials);
  } else {
    table_ev.emplace(f, monomials);
  }

  SearchReport report;
  report.p = p;
  report.n = f.n();
  report.d = d;
  report.mode = mode;
  report.seed = opts.seed;

  std::vector<Best> blocks;
  if (mode == SearchMode::exhaustive) {
    const std::uint64_t count = *en.count();
    report.candidates = count;
    const std::size_t nblocks = std::min<std::uint64_t>(count, 8 * jobs);
    blocks.resize(nblocks);
    parallel_blocks(count, nblocks, jobs, [&](std::size_t b, std::size_t lo, std::size_t hi) {
      blocks[b] = bits ? exhaustive_bits(*bit_ev, m, lo, hi) : exhaustive_table(*table_ev, p, m, lo, hi);
    });
  } else {
    if (opts.budget == 0) throw Error("sampled search needs a positive budget");
    report.candidates = opts.budget;
    const std::uint64_t nblocks = (opts.budget + kSampleBlock - 1) / kSampleBlock;
    blocks.resize(nblocks);
    parallel_blocks(nblocks, nblocks, jobs, [&](std::size_t b, std::size_t, std::size_t) {
      auto rng = block_rng(opts.seed, b);
      const std::uint64_t lo = b * kSampleBlock;
      const std::uint64_t hi = std::min(opts.budget, lo + kSampleBlock);
      Best best;
      std::vector<Residue> coeffs(m);
      std::vector<std::uint8_t> q;
      const std::uint64_t mask = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
      for (std::uint64_t s = lo; s < hi; ++s) {
        double v;
        std::uint64_t g = 0;
        if (bits) {
          g = rng() & mask;
          v = bit_ev->value(bit_ev->table_of(g));
        } else {
          q.assign(f.size(), 0);
          for (std::size_t j = 0; j < m; ++j) {
            coeffs[j] = static_cast<Residue>(rng() % p);
            if (coeffs[j]) table_ev->add(q, j, coeffs[j]);
          }
          v = table_ev->value(q);
        }
        if (best.beats(v, s)) {
          best.value = v;
          best.key = s;
          best.coeffs = bits ? bits_to_coeffs(g, m) : coeffs;
        }
      }
      blocks[b] = std::move(best);
    });
  }
  Best best;
  for (const auto& b : blocks) best.merge(b);
  report.best_value = std::min(1.0, best.value);
  report.best_poly = poly_from(field, f.n(), monomials, best.coeffs);
  return report;
}

MultiaffineOracle multiaffine_form(const Field& field, unsigned r, std::vector<Residue> coeffs) {
  if (r >= 32 || coeffs.size() != (std::size_t{1} << r)) {
    throw Error("a multiaffine form in " + std::to_string(r) + " variables needs 2^r coefficients");
  }
  for (auto& c : coeffs) c %= field.p();
  return [field, r, coeffs = std::move(coeffs)](std::span<const Residue> x) {
    if (x.size() != r) throw Error("multiaffine form evaluated at the wrong arity");
    Residue total = 0;
    for (std::size_t s = 0; s < coeffs.size(); ++s) {
      if (!coeffs[s]) continue;
      Residue term = coeffs[s];
      for (unsigned i = 0; i < r && term; ++i)
        if (s >> i & 1) term = field.mul(term, x[i] % field.p());
      total = field.add(total, term);
    }
    return total;
  };
}

ZeroProbResult zero_prob_experiment(const Field& field, unsigned r, const MultiaffineOracle& oracle,
                                    const ZeroProbOptions& opts) {
  if (r == 0) throw Error("need at least one variable");
  const unsigned p = field.p();
  ZeroProbResult out;
  out.p = p;
  out.r = r;
  out.seed = opts.seed;
  out.bound = 1.0 - std::pow(1.0 - 1.0 / p, static_cast<double>(r));
  out.leading = multiaffine_leading_coeff(field, r, oracle, opts.seed);
  if (out.leading == 0) throw Error("leading coefficient is zero");

  const std::uint64_t space = saturating_pow(p, r);
  out.mode = opts.mode.value_or(space <= kExhaustiveZeroProb ? SearchMode::exhaustive
                                                             : SearchMode::sampled);
  if (out.mode == SearchMode::exhaustive) {
    const VectorSpace vs(p, r);
    for (std::size_t idx = 0; idx < vs.size(); ++idx) {
      if (oracle(vs.point(idx)) == 0) ++out.zeros;
    }
    out.evaluated = vs.size();
  } else {
    if (opts.samples == 0) throw Error("sampled mode needs a positive sample count");
    auto rng = block_rng(opts.seed, 0);
    FpVector x(r);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
      for (auto& v : x) v = static_cast<Residue>(rng() % p);
      if (oracle(x) == 0) ++out.zeros;
    }
    out.evaluated = opts.samples;
  }
  out.probability = static_cast<double>(out.zeros) / static_cast<double>(out.evaluated);
  if (out.mode == SearchMode::sampled) {
    out.std_error = std::sqrt(out.probability * (1.0 - out.probability) / static_cast<double>(out.evaluated));
  }
  return out;
}

DecayCurve decay_curve(const Field& field, unsigned k, unsigned n_lo, unsigned n_hi,
                       const DecayOptions& opts) {
  if (k < field.p() + 1) throw Error("decay curves need k >= p+1");
  if (n_lo == 0 || n_lo > n_hi) throw Error("empty or invalid n range");
  DecayCurve curve;
  curve.p = field.p();
  curve.k = k;
  curve.d = opts.d.value_or(k - 1);
  curve.boundary = k == field.p() + 1;
  curve.control = opts.control;
  for (unsigned n = n_lo; n <= n_hi; ++n) {
    ComplexTable f = [&] {
      if (!opts.control) return phase_function(make_counterexample(field, k, n).poly);
      const ClassicalEnumeration en(field, n, curve.d);
      auto rng = block_rng(opts.seed, n);
      std::vector<Residue> coeffs(en.monomials().size());
      for (auto& c : coeffs) c = static_cast<Residue>(rng() % field.p());
      return phase_function(poly_from(field, n, en.monomials(), coeffs));
    }();
    const auto count = ClassicalEnumeration(field, n, curve.d).count();
    const SearchMode mode =
        count && *count <= opts.budget ? SearchMode::exhaustive : SearchMode::sampled;
    const auto report = max_correlation(f, curve.d, mode, {opts.budget, opts.seed, opts.jobs});
    curve.rows.push_back({n, mode, report.best_value, report.candidates, opts.seed, report.best_poly});
  }
  return curve;
}

std::string decay_csv(const DecayCurve& curve) {
  std::string out = "n,p,k,d,mode,best_value,candidates,seed\n";
  char buf[256];
  for (const auto& row : curve.rows) {
    std::snprintf(buf, sizeof buf, "%u,%u,%u,%u,%s,%.17g,%llu,%llu\n", row.n, curve.p, curve.k,
                  curve.d, to_string(row.mode).c_str(), row.best_value,
                  static_cast<unsigned long long>(row.candidates),
                  static_cast<unsigned long long>(row.seed));
    out += buf;
  }
  return out;
}

}  // namespace phasekit
