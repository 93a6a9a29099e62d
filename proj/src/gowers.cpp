#include "phasekit/gowers.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "phasekit/parallel.hpp"

namespace phasekit {

namespace {

constexpr double kBoundTolerance = 1e-9;
constexpr std::uint64_t kDirectCutoff = std::uint64_t{1} << 18;
constexpr std::uint64_t kDenseHistogram = std::uint64_t{1} << 16;

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

std::uint64_t saturating_pow(std::uint64_t base, unsigned e) {
  std::uint64_t r = 1;
  while (e-- > 0) r = saturating_mul(r, base);
  return r;
}

void check_order(unsigned d) {
  if (d < 1) throw Error("Gowers norm order must be at least 1");
}

void check_budget(std::uint64_t cost, std::uint64_t budget) {
  if (cost > budget) throw BudgetExceeded("Gowers enumeration exceeds budget", cost, budget);
}

// Index permutation x -> x + h. For p = 2 addition is XOR and no table is built.
class Shift {
 public:
  Shift(const VectorSpace& space, std::size_t h) : h_(h), xor_(space.p() == 2) {
    if (!xor_) perm_ = space.translation(space.point(h));
  }
  std::size_t operator()(std::size_t x) const { return xor_ ? (x ^ h_) : perm_[x]; }

 private:
  std::size_t h_;
  bool xor_;
  std::vector<std::size_t> perm_;
};

using CVec = std::vector<std::complex<double>>;

// ||g||_{U^d}^{2^d}, with scratch[t] holding the level-t derivative buffer.
double power_sum(const VectorSpace& space, const CVec& g, unsigned d, std::vector<CVec>& scratch) {
  const std::size_t size = g.size();
  if (d == 1) {
    std::complex<double> s = 0;
    for (const auto& v : g) s += v;
    return std::norm(s / static_cast<double>(size));
  }
  CVec& next = scratch[d - 1];
  double acc = 0.0;
  for (std::size_t h = 0; h < size; ++h) {
    const Shift shift(space, h);
    for (std::size_t x = 0; x < size; ++x) next[x] = g[shift(x)] * std::conj(g[x]);
    acc += power_sum(space, next, d - 1, scratch);
  }
  return acc / static_cast<double>(size);
}

double recursive_norm(const ComplexTable& f, unsigned d, unsigned jobs) {
  const auto& space = f.space();
  const std::size_t size = f.size();
  if (d == 1) {
    std::vector<CVec> scratch;
    return std::sqrt(power_sum(space, f.values(), 1, scratch));
  }
  // Outer h is split across workers; partial sums are kept per h and added
  // in index order so the result does not depend on the thread count.
  std::vector<double> partial(size, 0.0);
  parallel_blocks(size, std::min<std::size_t>(size, 64), jobs,
                  [&](std::size_t, std::size_t lo, std::size_t hi) {
                    std::vector<CVec> scratch(d, CVec(size));
                    CVec& top = scratch[d - 1];
                    for (std::size_t h = lo; h < hi; ++h) {
                      const Shift shift(space, h);
                      for (std::size_t x = 0; x < size; ++x) {
                        top[x] = f[shift(x)] * std::conj(f[x]);
                      }
                      // Level d-1 reuses scratch slots below d-1.
                      partial[h] = power_sum(space, top, d - 1, scratch);
                    }
                  });
  double acc = 0.0;
  for (double v : partial) acc += v;
  return std::pow(std::max(0.0, acc / static_cast<double>(size)), 1.0 / std::ldexp(1.0, d));
}

double direct_norm(const ComplexTable& f, unsigned d) {
  const auto& space = f.space();
  const std::size_t size = f.size();
  const std::size_t corners = std::size_t{1} << d;
  std::vector<std::size_t> h(d, 0), corner(corners, 0);
  std::complex<double> total = 0;
  while (true) {
    for (std::size_t w = 1; w < corners; ++w) {
      const unsigned top = static_cast<unsigned>(std::bit_width(w) - 1);
      corner[w] = space.add(corner[w & ~(std::size_t{1} << top)], h[top]);
    }
    for (std::size_t x = 0; x < size; ++x) {
      std::complex<double> prod = 1;
      for (std::size_t w = 0; w < corners; ++w) {
        const auto v = f[space.add(x, corner[w])];
        prod *= ((d - std::popcount(w)) % 2 == 1) ? std::conj(v) : v;
      }
      total += prod;
    }
    unsigned t = 0;
    while (t < d && ++h[t] == size) h[t++] = 0;
    if (t == d) break;
  }
  const double mean = std::abs(total) / std::pow(static_cast<double>(size), d + 1);
  return std::pow(mean, 1.0 / std::ldexp(1.0, d));
}

// Histogram of iterated-derivative numerators for one worker.
class Histogram {
 public:
  explicit Histogram(std::uint64_t modulus) {
    if (modulus <= kDenseHistogram) dense_.assign(modulus, 0);
  }
  void add(std::uint64_t v, std::uint64_t count = 1) {
    if (!dense_.empty()) {
      dense_[v] += count;
    } else {
      sparse_[v] += count;
    }
  }
  void merge_into(std::map<std::uint64_t, std::uint64_t>& out) const {
    for (std::size_t v = 0; v < dense_.size(); ++v)
      if (dense_[v] != 0) out[v] += dense_[v];
    for (const auto& [v, c] : sparse_) out[v] += c;
  }

 private:
  std::vector<std::uint64_t> dense_;
  std::unordered_map<std::uint64_t, std::uint64_t> sparse_;
};

struct PhaseWalk {
  const VectorSpace& space;
  std::uint64_t modulus;
  unsigned d;
  bool constant_in_x;
  std::vector<std::vector<std::uint64_t>> levels;  // levels[t] = Delta^t table

  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
    return a >= b ? a - b : a + modulus - b;
  }

  void derive(unsigned t, std::size_t h) {
    const auto& prev = levels[t - 1];
    auto& cur = levels[t];
    const Shift shift(space, h);
    for (std::size_t x = 0; x < prev.size(); ++x) cur[x] = sub(prev[shift(x)], prev[x]);
  }

  // Levels 0..t-1 are filled; enumerate h_t..h_d.
  void walk(unsigned t, Histogram& hist) {
    const std::size_t size = space.size();
    const auto& prev = levels[t - 1];
    if (t == d) {
      if (constant_in_x) {
        // index(0 + h) = h, so only the x = 0 slot is read.
        for (std::size_t h = 0; h < size; ++h) hist.add(sub(prev[h], prev[0]));
      } else {
        for (std::size_t h = 0; h < size; ++h) {
          const Shift shift(space, h);
          for (std::size_t x = 0; x < size; ++x) hist.add(sub(prev[shift(x)], prev[x]));
        }
      }
      return;
    }
    for (std::size_t h = 0; h < size; ++h) {
      derive(t, h);
      walk(t + 1, hist);
    }
  }
};

}  // namespace

std::string_view to_string(GowersMethod method) {
  switch (method) {
    case GowersMethod::direct_enumeration: return "direct_enumeration";
    case GowersMethod::recursive_table: return "recursive_table";
    case GowersMethod::phase_histogram: return "phase_histogram";
  }
  return "unknown";
}

GowersMethod parse_gowers_method(std::string_view name) {
  for (auto m : {GowersMethod::direct_enumeration, GowersMethod::recursive_table,
                 GowersMethod::phase_histogram}) {
    if (name == to_string(m)) return m;
  }
  throw Error("unknown Gowers method '" + std::string(name) + "'");
}

ComplexTable mult_derivative(const ComplexTable& f, std::span<const Residue> h) {
  if (h.size() != f.n()) throw Error("shift dimension does not match the table");
  const auto shift = f.space().translation(h);
  ComplexTable out(f.field(), f.n());
  for (std::size_t x = 0; x < f.size(); ++x) out[x] = f[shift[x]] * std::conj(f[x]);
  return out;
}

GowersResult gowers_norm(const ComplexTable& f, unsigned d, const GowersOptions& options) {
  check_order(d);
  for (const auto& v : f.values()) {
    if (!(std::abs(v) <= 1.0 + kBoundTolerance)) throw Error("input table is not 1-bounded");
  }
  const std::uint64_t size = f.size();
  const std::uint64_t tuples = saturating_pow(size, d + 1);
  const std::uint64_t direct_cost = saturating_mul(tuples, std::uint64_t{1} << d);
  const std::uint64_t recursive_cost = saturating_pow(size, d);

  GowersResult result;
  result.d = d;
  result.count = tuples;
  result.method = options.method.value_or(direct_cost <= kDirectCutoff
                                              ? GowersMethod::direct_enumeration
                                              : GowersMethod::recursive_table);
  switch (result.method) {
    case GowersMethod::direct_enumeration:
      check_budget(direct_cost, options.budget);
      result.norm = direct_norm(f, d);
      break;
    case GowersMethod::recursive_table:
      check_budget(recursive_cost, options.budget);
      result.norm = recursive_norm(f, d, options.jobs);
      break;
    case GowersMethod::phase_histogram:
      throw Error("the phase histogram path needs a polynomial, not a table");
  }
  return result;
}

GowersResult gowers_norm_phase(const NonClassicalPoly& poly, unsigned d,
                               const GowersOptions& options) {
  check_order(d);
  if (options.method && *options.method != GowersMethod::phase_histogram) {
    return gowers_norm(phase_function(poly), d, options);
  }
  const auto table = evaluate_table(poly);
  const Field& field = poly.field();
  const unsigned depth = poly.value_depth();
  const std::uint64_t modulus = field.modulus(depth);
  const std::uint64_t size = table.size();
  const bool constant_in_x = degree_and_depth(poly).degree <= d;

  GowersResult result;
  result.d = d;
  result.method = GowersMethod::phase_histogram;
  result.histogram_depth = depth;
  result.count = saturating_pow(size, constant_in_x ? d : d + 1);
  check_budget(result.count, options.budget);

  std::vector<std::uint64_t> base(size);
  for (std::size_t x = 0; x < size; ++x) base[x] = field.numerator_at(table[x], depth);

  // Workers split the first shift; histograms are integer counts, so the
  // merge is exact and order independent.
  const unsigned jobs = options.jobs == 0 ? default_jobs() : options.jobs;
  const std::size_t blocks = d == 1 ? 1 : std::min<std::size_t>(size, 4 * jobs);
  std::vector<Histogram> partial(blocks, Histogram(modulus));
  parallel_blocks(d == 1 ? 1 : size, blocks, jobs,
                  [&](std::size_t b, std::size_t lo, std::size_t hi) {
                    PhaseWalk walk{table.space(), modulus, d, constant_in_x,
                                   std::vector<std::vector<std::uint64_t>>(d)};
                    walk.levels[0] = base;
                    if (d == 1) {
                      walk.walk(1, partial[b]);
                      return;
                    }
                    for (unsigned t = 1; t < d; ++t) walk.levels[t].resize(size);
                    for (std::size_t h = lo; h < hi; ++h) {
                      walk.derive(1, h);
                      walk.walk(2, partial[b]);
                    }
                  });
  for (const auto& h : partial) h.merge_into(result.histogram);

  if (result.histogram.size() == 1 && result.histogram.begin()->first == 0) {
    result.norm = 1.0;
    return result;
  }
  std::complex<double> sum = 0;
  for (const auto& [v, c] : result.histogram) {
    sum += static_cast<double>(c) * root_of_unity(v, modulus);
  }
  const double mean = std::abs(sum) / static_cast<double>(result.count);
  result.norm = std::pow(mean, 1.0 / std::ldexp(1.0, d));
  return result;
}

double correlation(const ComplexTable& f, const ClassicalPoly& q) {
  if (q.n() != f.n() || q.p() != f.field().p()) {
    throw Error("polynomial and table live on different spaces");
  }
  const auto values = evaluate_table(q);
  const Field& field = f.field();
  std::complex<double> sum = 0;
  for (std::size_t x = 0; x < f.size(); ++x) sum += f[x] * field.e_p(field.neg(values[x]));
  return std::abs(sum) / static_cast<double>(f.size());
}

ComplexTable fourier_fp(const ComplexTable& f) {
  const Field& field = f.field();
  const unsigned p = field.p();
  std::vector<std::complex<double>> kernel(static_cast<std::size_t>(p) * p);
  for (Residue a = 0; a < p; ++a)
    for (Residue x = 0; x < p; ++x) kernel[a * p + x] = field.e_p(field.neg(field.mul(a, x)));

  CVec data = f.values();
  CVec in(p);
  const auto& space = f.space();
  for (unsigned axis = 0; axis < f.n(); ++axis) {
    const std::size_t stride = space.stride(axis);
    for (std::size_t base = 0; base < data.size(); base += stride * p) {
      for (std::size_t off = 0; off < stride; ++off) {
        for (unsigned x = 0; x < p; ++x) in[x] = data[base + off + x * stride];
        for (unsigned a = 0; a < p; ++a) {
          std::complex<double> s = 0;
          for (unsigned x = 0; x < p; ++x) s += kernel[a * p + x] * in[x];
          data[base + off + a * stride] = s;
        }
      }
    }
  }
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return ComplexTable(field, f.n(), std::move(data));
}

}  // namespace phasekit
