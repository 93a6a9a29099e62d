#include "phasekit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "phasekit/gowers.hpp"
#include "phasekit/hyperplane.hpp"
#include "phasekit/json_io.hpp"
#include "phasekit/quasisym.hpp"
#include "phasekit/random.hpp"
#include "phasekit/search.hpp"
#include "phasekit/symmetrize.hpp"

namespace phasekit {

namespace {

constexpr double kTol = 1e-9;

// Largest n' <= n (and >= 1) with p^n' <= limit.
unsigned fit_n(unsigned p, unsigned n, std::uint64_t limit) {
  unsigned out = 1;
  std::uint64_t size = p;
  while (out < n && size * p <= limit) {
    size *= p;
    ++out;
  }
  return out;
}

std::uint64_t ipow(std::uint64_t b, unsigned e) {
  std::uint64_t out = 1;
  while (e--) out *= b;
  return out;
}

class Battery {
 public:
  Battery(VerifyReport& report, std::string suite, const VerifyConfig& cfg)
      : report_(report), suite_(std::move(suite)), cfg_(cfg), field_(cfg.p),
        rng_(cfg.seed ^ std::hash<std::string>{}(suite_)) {}

  const Field& field() const { return field_; }
  const VerifyConfig& cfg() const { return cfg_; }
  Rng& rng() { return rng_; }

  // Runs one property; an exception counts as a failure of that property.
  void run(const std::string& check, const std::function<void()>& body) {
    current_ = check;
    try {
      body();
    } catch (const std::exception& e) {
      fail(std::string("threw: ") + e.what());
    }
  }

  void expect(bool ok, const std::function<std::string()>& detail) {
    ++report_.checks;
    if (!ok) fail(detail());
  }

  void absorb(const OracleReport& r) {
    report_.checks += r.checked;
    if (!r.passed()) fail(r.name + ": " + *r.counterexample);
  }

 private:
  void fail(const std::string& detail) {
    // One entry per property keeps the report readable.
    for (const auto& f : report_.failures)
      if (f.suite == suite_ && f.check == current_) return;
    report_.failures.push_back({suite_, current_, detail});
  }

  VerifyReport& report_;
  std::string suite_;
  const VerifyConfig& cfg_;
  Field field_;
  Rng rng_;
  std::string current_;
};

std::string show(const NonClassicalPoly& poly) { return to_json(poly).dump(); }
std::string show(const ClassicalPoly& poly) { return to_json(poly).dump(); }

void fp_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned depth = std::min(4u, f.max_depth());
  b.run("combine is an abelian group", [&] {
    const PhaseValue zero{};
    for (unsigned t = 0; t < 10 * b.cfg().trials; ++t) {
      const auto x = random_phase(b.rng(), f, depth);
      const auto y = random_phase(b.rng(), f, depth);
      const auto z = random_phase(b.rng(), f, depth);
      b.expect(f.combine(f.combine(x, y, 1), z, 1) == f.combine(x, f.combine(y, z, 1), 1),
               [&] { return "associativity at " + format_phase(f, x); });
      b.expect(f.combine(x, y, 1) == f.combine(y, x, 1), [&] { return "commutativity at " + format_phase(f, x); });
      b.expect(f.combine(x, zero, 1) == x, [&] { return "identity at " + format_phase(f, x); });
      b.expect(f.combine(f.combine(x, y, 1), y, -1) == x, [&] { return "inverse at " + format_phase(f, x); });
      b.expect(f.combine(x, f.negate(x), 1) == zero, [&] { return "negate at " + format_phase(f, x); });
    }
  });
  b.run("normalization is idempotent", [&] {
    for (unsigned t = 0; t < 10 * b.cfg().trials; ++t) {
      const PhaseValue raw{std::uniform_int_distribution<std::uint64_t>(0, f.modulus(depth) * 3)(b.rng()), depth};
      const auto once = f.normalize(raw);
      b.expect(f.normalize(once) == once, [&] { return "numerator " + std::to_string(raw.numerator); });
    }
  });
  b.run("e_p is a character", [&] {
    for (Residue x = 0; x < f.p(); ++x)
      for (Residue y = 0; y < f.p(); ++y)
        b.expect(std::abs(f.e_p(f.add(x, y)) - f.e_p(x) * f.e_p(y)) < 1e-12,
                 [&] { return "x=" + std::to_string(x) + " y=" + std::to_string(y); });
  });
  b.run("embedding is a homomorphism", [&] {
    for (Residue x = 0; x < f.p(); ++x)
      for (Residue y = 0; y < f.p(); ++y)
        b.expect(f.embed(f.add(x, y)) == f.combine(f.embed(x), f.embed(y), 1),
                 [&] { return "x=" + std::to_string(x) + " y=" + std::to_string(y); });
  });
}

void poly_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned n = fit_n(f.p(), b.cfg().n, 729);
  const unsigned depth = std::min(3u, f.max_depth());
  b.run("canonical round trip", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, depth, ~0u, 0.3);
      b.expect(canonicalize(evaluate_table(poly)) == poly, [&] { return show(poly); });
    }
  });
  b.run("d+1 derivatives kill degree d", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, 2, ~0u, 0.3);
      const unsigned deg = degree_and_depth(poly).degree;
      auto current = poly;
      for (const auto& h : random_shifts(b.rng(), f.p(), n, deg + 1)) current = additive_derivative(current, h);
      b.expect(current.is_zero(), [&] { return show(poly); });
    }
  });
  b.run("discrete Leibniz rule", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto p = random_classical(b.rng(), f, n, 2);
      const auto q = random_classical(b.rng(), f, n, 2);
      const auto h = random_vector(b.rng(), f.p(), n);
      const auto delta = [&](const ClassicalPoly& a) {
        return ClassicalPoly::from_phase(additive_derivative(a.to_phase(), h));
      };
      const auto dp = delta(p), dq = delta(q);
      b.expect(delta(p * q) == dp * q + p * dq + dp * dq, [&] { return show(p) + " * " + show(q); });
    }
  });
  b.run("classical-plus-constant iff every j = 0", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, 1 + t % 2, ~0u, 0.2);
      const bool all_zero_j =
          std::all_of(poly.terms().begin(), poly.terms().end(), [](const auto& kv) { return kv.first.j == 0; });
      b.expect(poly.is_classical_plus_constant() == all_zero_j, [&] { return show(poly); });
      // Classical-plus-constant exactly when P - P(0) lies in U_1 everywhere.
      const auto table = evaluate_table(poly);
      bool in_u1 = true;
      for (const auto& v : table.values()) in_u1 = in_u1 && f.combine(v, table[0], -1).depth <= 1;
      b.expect(in_u1 == all_zero_j, [&] { return "value test for " + show(poly); });
    }
  });
  b.run("compose_linear with M then M^-1", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, depth, ~0u, 0.3);
      const auto m = random_invertible(b.rng(), f, n);
      b.expect(compose_linear(compose_linear(poly, m), *m.inverse(f)) == poly, [&] { return show(poly); });
    }
  });
}

void gowers_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned p = f.p();
  const unsigned dmax = std::clamp(b.cfg().k, 2u, 4u);
  const unsigned n = fit_n(p, b.cfg().n, std::max<std::uint64_t>(p, std::llround(std::pow(2.0, 20.0 / (dmax + 1)))));
  GowersOptions opts;
  opts.jobs = b.cfg().jobs;
  b.run("monotone in d", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto g = random_bounded_table(b.rng(), f, n);
      double prev = 0.0;
      for (unsigned d = 1; d <= dmax; ++d) {
        const double v = gowers_norm(g, d, opts).norm;
        b.expect(prev <= v + kTol, [&] { return "U^" + std::to_string(d - 1) + " > U^" + std::to_string(d); });
        prev = v;
      }
    }
  });
  b.run("U2 Fourier identity", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto g = random_bounded_table(b.rng(), f, n);
      const auto hat = fourier_fp(g);
      double s = 0;
      for (const auto& v : hat.values()) s += std::pow(std::abs(v), 4);
      const double u2 = std::pow(gowers_norm(g, 2, opts).norm, 4);
      b.expect(std::abs(u2 - s) < kTol, [&] { return std::to_string(u2) + " vs " + std::to_string(s); });
    }
  });
  b.run("norm one at deg+1", [&] {
    const std::uint64_t size = ipow(p, n);
    unsigned max_deg = 0;
    while (ipow(size, max_deg + 2) <= (std::uint64_t{1} << 22)) ++max_deg;
    if (max_deg == 0) return;
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, 3, max_deg, 0.3);
      const unsigned deg = degree_and_depth(poly).degree;
      GowersOptions h = opts;
      h.method = GowersMethod::phase_histogram;
      const auto r = gowers_norm_phase(poly, deg + 1, h);
      b.expect(r.norm == 1.0, [&] { return show(poly); });
    }
  });
  b.run("counterexample has norm one", [&] {
    const unsigned k = b.cfg().k;
    if (k <= p) return;
    const unsigned cn = fit_n(p, b.cfg().n, std::max<std::uint64_t>(p, std::llround(std::pow(2.0, 24.0 / k))));
    GowersOptions h = opts;
    h.method = GowersMethod::phase_histogram;
    const auto r = gowers_norm_phase(make_counterexample(f, k, cn).poly, k, h);
    b.expect(r.norm == 1.0, [&] { return "n=" + std::to_string(cn) + " norm " + std::to_string(r.norm); });
  });
  b.run("global phase invariance", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      auto g = random_bounded_table(b.rng(), f, n);
      const auto q = random_classical(b.rng(), f, n, 2);
      const double before = correlation(g, q);
      const auto shift = f.to_complex(random_phase(b.rng(), f, 3));
      for (auto& v : g.values()) v *= shift;
      b.expect(std::abs(correlation(g, q) - before) < 1e-12, [&] { return show(q); });
    }
  });
  b.run("methods agree", [&] {
    const unsigned d = 2;
    const unsigned tn = fit_n(p, n, std::max<std::uint64_t>(p, std::llround(std::pow(2.0, 16.0 / (d + 1)))));
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, tn, 2, ~0u, 0.4);
      std::vector<double> norms;
      for (auto m : {GowersMethod::direct_enumeration, GowersMethod::recursive_table, GowersMethod::phase_histogram}) {
        GowersOptions o = opts;
        o.method = m;
        norms.push_back(gowers_norm_phase(poly, d, o).norm);
      }
      b.expect(std::abs(norms[0] - norms[1]) < kTol && std::abs(norms[1] - norms[2]) < kTol,
               [&] { return show(poly); });
    }
  });
}

void quasisym_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned n = std::min(b.cfg().n, 3u);
  for (unsigned k = 1; k <= b.cfg().k; ++k) {
    const std::string tag = " k=" + std::to_string(k);
    b.run("symbolic forms match brute force" + tag, [&] {
      b.absorb(verify_derivative_forms(f, k, n, 200, b.cfg().seed + k));
    });
    b.run("leading coefficient of T_a" + tag, [&] {
      b.absorb(verify_leading_coefficients(f, k, 20, b.cfg().seed + k));
    });
    if (k >= f.p() + 1) {
      b.run("combined leading coefficient" + tag, [&] {
        b.absorb(verify_combined_leading(f, k, b.cfg().trials, b.cfg().seed + k));
      });
    }
  }
  b.run("Wilson", [&] {
    for (unsigned p : {2u, 3u, 5u, 7u, f.p()}) {
      b.expect(wilson_holds(Field(p)), [&] { return "p=" + std::to_string(p); });
    }
  });
}

ClassicalPoly quasisymmetric_instance(Rng& rng, const Field& f, unsigned n, unsigned d) {
  ClassicalPoly out = random_classical(rng, f, n, d - 1);
  for (const auto& a : compositions(d, f.p())) out = out + scale(quasisym_poly(f, a, n), random_residue(rng, f.p()));
  return out;
}

void symmetrize_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned n = std::clamp(b.cfg().n, 3u, 7u);
  const auto d_of = [&](unsigned t) { return 1 + t % std::min(3u, n); };
  b.run("decomposition identity", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const unsigned d = d_of(t);
      const auto poly = random_classical(b.rng(), f, n, d, 0.3);
      const auto search = find_monochromatic(poly, d, n);
      const auto& subset = search.subset ? *search.subset : search.largest;
      if (subset.empty()) continue;
      b.absorb(verify_decomposition(poly, d, subset, b.cfg().seed + t));
    }
  });
  b.run("colours ignore lower degree", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const unsigned d = d_of(t);
      const auto poly = random_classical(b.rng(), f, n, d);
      const auto shifted = poly + random_classical(b.rng(), f, n, d - 1);
      std::vector<unsigned> edge(d);
      for (unsigned i = 0; i < d; ++i) edge[i] = i;
      do {
        b.expect(edge_color(poly, d, edge) == edge_color(shifted, d, edge), [&] { return show(poly); });
        int i = static_cast<int>(d) - 1;
        while (i >= 0 && edge[i] == n - d + i) --i;
        if (i < 0) break;
        ++edge[i];
        for (unsigned j = i + 1; j < d; ++j) edge[j] = edge[j - 1] + 1;
      } while (true);
    }
  });
  b.run("success is monotone in m", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const unsigned d = d_of(t);
      const auto poly = random_classical(b.rng(), f, n, d, 0.3);
      unsigned best = 0;
      for (unsigned m = d; m <= n; ++m)
        if (find_monochromatic(poly, d, m).subset) best = m;
      for (unsigned m = d; m <= best; ++m) {
        b.expect(find_monochromatic(poly, d, m).subset.has_value(),
                 [&] { return "m=" + std::to_string(m) + " fails below " + std::to_string(best); });
      }
    }
  });
  b.run("quasisymmetric input is monochromatic on [n]", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const unsigned d = d_of(t);
      const auto poly = quasisymmetric_instance(b.rng(), f, n, d);
      const auto r = find_monochromatic(poly, d, n);
      b.expect(r.subset && r.subset->size() == n, [&] { return show(poly); });
    }
  });
}

void hyperplane_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned n = fit_n(f.p(), std::min(b.cfg().n, 4u), 4096);
  const auto random_low = [&] { return random_nonclassical(b.rng(), f, n, 2, f.p(), 0.4); };
  b.run("agreement on the hyperplane", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_low();
      const auto split = hyperplane_restriction(poly);
      const auto table = evaluate_table(poly);
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto x = table.space().point(i);
        if (dot(f, split.covector, x) != 0) continue;
        b.expect(table[i] == f.combine(split.alpha, f.embed(split.q.eval(x)), 1), [&] { return show(poly); });
      }
    }
  });
  b.run("extraction guarantee", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_low();
      auto g = phase_function(poly);
      std::uniform_real_distribution<double> small(-0.3, 0.3);
      for (auto& v : g.values()) v *= std::polar(1.0 - std::abs(small(b.rng())), small(b.rng()));
      const auto ex = extract_classical_correlate(g, poly);
      b.expect(ex.corr >= ex.epsilon / std::sqrt(double(f.p())) - kTol, [&] { return show(poly); });
    }
  });
  b.run("planted recovery", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_low();
      const auto ex = extract_classical_correlate(phase_function(poly), poly);
      b.expect(ex.corr >= 1.0 / std::sqrt(double(f.p())) - kTol, [&] { return show(poly); });
    }
  });
  b.run("basis change soundness", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_low();
      const auto ex = extract_classical_correlate(random_bounded_table(b.rng(), f, n), poly);
      const auto& m = ex.split.basis_change;
      b.expect(compose_linear(ex.q_total, m.inverse(f)->multiply(f, m)) == ex.q_total,
               [&] { return show(ex.q_total); });
    }
  });
}

void search_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned p = f.p();
  const unsigned k = b.cfg().k;
  const unsigned d = std::max(1u, k - 1);
  const bool family = k >= p + 1;
  const auto instance = [&](unsigned n) {
    return family ? phase_function(make_counterexample(f, k, n).poly) : random_bounded_table(b.rng(), f, n);
  };
  const auto exhaustive_ok = [&](unsigned n, std::uint64_t limit) {
    const auto c = ClassicalEnumeration(f, n, d).count();
    return c && *c <= limit && ipow(p, n) <= 4096;
  };
  b.run("sampled never beats exhaustive", [&] {
    for (unsigned n = 1; n <= b.cfg().n && exhaustive_ok(n, 1 << 16); ++n) {
      const auto g = instance(n);
      const auto ex = max_correlation(g, d, SearchMode::exhaustive, {kDefaultSearchBudget, 0, b.cfg().jobs});
      const auto sm = max_correlation(g, d, SearchMode::sampled, {2000, b.cfg().seed, b.cfg().jobs});
      b.expect(sm.best_value <= ex.best_value, [&] { return "n=" + std::to_string(n); });
    }
  });
  b.run("monotone decay", [&] {
    if (!family) return;
    double prev = 1.0;
    for (unsigned n = 1; n <= b.cfg().n && exhaustive_ok(n, 1 << 22); ++n) {
      const auto r = max_correlation(instance(n), d, SearchMode::exhaustive, {kDefaultSearchBudget, 0, b.cfg().jobs});
      b.expect(r.best_value <= prev + kTol, [&] { return "n=" + std::to_string(n); });
      prev = r.best_value;
    }
  });
  b.run("vanishing probability bound", [&] {
    for (unsigned r = 1; r <= 2; ++r) {
      const unsigned terms = 1u << r;
      const VectorSpace all(p, terms);
      for (std::size_t idx = 0; idx < all.size(); ++idx) {
        const auto c = all.point(idx);
        if (c[terms - 1] == 0) continue;
        const auto res = zero_prob_experiment(f, r, multiaffine_form(f, r, c), {SearchMode::exhaustive, 0, b.cfg().seed});
        b.expect(res.probability <= res.bound + 1e-12, [&] { return "coefficients " + format_vector(c); });
      }
      std::vector<Residue> product(terms, 0);
      product[terms - 1] = 1;
      const auto eq = zero_prob_experiment(f, r, multiaffine_form(f, r, product));
      b.expect(std::abs(eq.probability - eq.bound) < 1e-12, [&] { return "product r=" + std::to_string(r); });
    }
  });
  b.run("seeded reports are reproducible", [&] {
    const unsigned n = fit_n(p, b.cfg().n, 64);
    const auto g = instance(n);
    const auto a = max_correlation(g, d, SearchMode::sampled, {5000, b.cfg().seed, 1});
    const auto c = max_correlation(g, d, SearchMode::sampled, {5000, b.cfg().seed, 3});
    b.expect(a == c, [&] { return "n=" + std::to_string(n); });
  });
}

void json_suite(Battery& b) {
  const Field& f = b.field();
  const unsigned n = fit_n(f.p(), b.cfg().n, 729);
  b.run("polynomials re-parse", [&] {
    for (unsigned t = 0; t < b.cfg().trials; ++t) {
      const auto poly = random_nonclassical(b.rng(), f, n, 3, ~0u, 0.3);
      b.expect(poly_from_json(Json::parse(to_json(poly).dump())) == poly, [&] { return show(poly); });
      const auto q = random_classical(b.rng(), f, n, 3);
      b.expect(classical_from_json(Json::parse(to_json(q).dump())) == q, [&] { return show(q); });
    }
    if (b.cfg().k > f.p()) {
      const auto c = make_counterexample(f, b.cfg().k, n).poly;
      b.expect(poly_from_json(Json::parse(to_json(c).dump())) == c, [&] { return show(c); });
    }
  });
  b.run("tables re-parse", [&] {
    const auto poly = random_nonclassical(b.rng(), f, n, 3);
    const auto table = evaluate_table(poly);
    const auto back = phase_table_from_json(Json::parse(to_json(table).dump()));
    b.expect(back.values() == table.values(), [&] { return show(poly); });
  });
}

using SuiteFn = void (*)(Battery&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"fp", fp_suite},
      {"poly", poly_suite},
      {"gowers", gowers_suite},
      {"quasisym", quasisym_suite},
      {"symmetrize", symmetrize_suite},
      {"hyperplane", hyperplane_suite},
      {"search", search_suite},
      {"json", json_suite},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : registry()) out.push_back(name);
    return out;
  }();
  return names;
}

VerifyReport run_verify(const std::string& suite, const VerifyConfig& config) {
  Field field(config.p);
  if (config.n == 0) throw Error("n must be positive");
  if (config.k == 0) throw Error("k must be positive");
  VerifyReport report;
  bool found = false;
  for (const auto& [name, fn] : registry()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    Battery battery(report, name, config);
    fn(battery);
    report.suites.push_back(name);
  }
  if (!found) throw Error("unknown suite '" + suite + "'");
  return report;
}

}  // namespace phasekit
