#include "phasekit/cli.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <random>

#include "CLI11.hpp"
#include "phasekit/json_io.hpp"
#include "phasekit/verify.hpp"

namespace phasekit {

namespace {

struct UsageError : Error {
  using Error::Error;
};

struct Args {
  std::string format = "json";
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultSearchBudget;
  bool quiet = false;
  unsigned jobs = 1;

  unsigned p = 0;
  unsigned n = 0;
  unsigned k = 0;
  unsigned d = 0;
  unsigned r = 0;
  std::string poly;
  std::string table;
  std::string q;
  std::string x;
  std::vector<std::string> shifts;
  std::string method;
  std::string mode = "auto";
  std::string alpha;
  std::string coeffs;
  std::string y;
  std::string suite = "all";
  unsigned target = 0;
  std::uint64_t node_budget = std::uint64_t{1} << 24;
  std::uint64_t samples = 0;
  unsigned n_min = 1;
  unsigned n_max = 0;
  unsigned trials = 20;
  bool product = false;
  bool control = false;
};

class Runner {
 public:
  Runner(const Args& a, const CLI::App& app, std::ostream& out, std::ostream& err)
      : a_(a), app_(app), out_(out), err_(err) {
    seed_given_ = app.get_option("--seed")->count() > 0;
    budget_given_ = app.get_option("--budget")->count() > 0;
    seed_ = a.seed;
    if (!seed_given_) {
      std::random_device rd;
      seed_ = (std::uint64_t{rd()} << 32) | rd();
    }
  }

  int dispatch(const std::string& cmd) {
    static const std::map<std::string, void (Runner::*)()> table{
        {"eval", &Runner::eval},
        {"canonicalize", &Runner::canonicalize_cmd},
        {"derive", &Runner::derive},
        {"gowers", &Runner::gowers},
        {"correlate", &Runner::correlate},
        {"fourier", &Runner::fourier},
        {"counterexample", &Runner::counterexample},
        {"quasisym", &Runner::quasisym},
        {"symmetrize", &Runner::symmetrize},
        {"hyperplane-extract", &Runner::hyperplane},
        {"search-max", &Runner::search_max},
        {"zero-prob", &Runner::zero_prob},
        {"decay-curve", &Runner::decay},
        {"verify", &Runner::verify},
    };
    (this->*table.at(cmd))();
    return status_;
  }

 private:
  bool given(const std::string& sub, const std::string& opt) const {
    return app_.get_subcommand(sub)->get_option(opt)->count() > 0;
  }

  bool csv() const { return a_.format == "csv"; }

  void no_csv(const std::string& cmd) const {
    if (csv()) throw UsageError("csv output is not available for " + cmd);
  }

  void emit(const Json& j) { out_ << j.dump(2) << "\n"; }

  void note(const std::string& msg) {
    if (!a_.quiet) err_ << msg << "\n";
  }

  std::uint64_t seed() {
    if (!seed_given_ && !seed_noted_) {
      note("seed: " + std::to_string(seed_));
      seed_noted_ = true;
    }
    return seed_;
  }

  // Accepts a bare polynomial or any report that nests one under "poly".
  NonClassicalPoly load_poly(const std::string& text) const {
    Json j = load_json(text);
    if (!j.contains("terms") && j.contains("poly")) j = j["poly"];
    auto poly = poly_from_json(j);
    check_space(poly.p(), poly.n());
    return poly;
  }

  ClassicalPoly load_classical(const std::string& text) const {
    return ClassicalPoly::from_phase(load_poly(text));
  }

  void check_space(unsigned p, unsigned n) const {
    if (a_.p && a_.p != p) throw Error("--p " + std::to_string(a_.p) + " does not match input p = " + std::to_string(p));
    if (a_.n && a_.n != n) throw Error("--n " + std::to_string(a_.n) + " does not match input n = " + std::to_string(n));
  }

  // f from --table, or e(P) from --poly.
  ComplexTable load_function(const std::string& cmd) const {
    if (!a_.table.empty()) {
      auto t = complex_table_from_json(load_json(a_.table));
      check_space(t.field().p(), t.n());
      return t;
    }
    if (!a_.poly.empty()) return phase_function(load_poly(a_.poly));
    throw UsageError(cmd + " needs --table or --poly");
  }

  Field field() const {
    if (!a_.p) throw UsageError("--p is required");
    return Field(a_.p);
  }

  unsigned need_n() const {
    if (!a_.n) throw UsageError("--n is required");
    return a_.n;
  }

  unsigned need_k() const {
    if (!a_.k) throw UsageError("--k is required");
    return a_.k;
  }

  std::optional<SearchMode> mode() const {
    if (a_.mode == "auto") return std::nullopt;
    return parse_search_mode(a_.mode);
  }

  void eval() {
    const auto poly = load_poly(a_.poly);
    if (!a_.x.empty()) {
      no_csv("eval --x");
      const auto x = parse_vector(poly.field(), a_.x);
      if (x.size() != poly.n()) throw Error("point has " + std::to_string(x.size()) + " coordinates");
      emit({{"x", x}, {"value", format_phase(poly.field(), eval_nonclassical(poly, x))}});
      return;
    }
    const auto table = evaluate_table(poly);
    if (csv()) {
      out_ << "index,x,value\n";
      for (std::size_t i = 0; i < table.size(); ++i) {
        out_ << i << ",\"" << format_vector(table.space().point(i)) << "\","
             << format_phase(poly.field(), table[i]) << "\n";
      }
      return;
    }
    emit(to_json(table));
  }

  void canonicalize_cmd() {
    no_csv("canonicalize");
    if (!a_.table.empty()) {
      const auto t = phase_table_from_json(load_json(a_.table));
      check_space(t.field().p(), t.n());
      emit(to_json(canonicalize(t)));
    } else if (!a_.poly.empty()) {
      emit(to_json(canonicalize(evaluate_table(load_poly(a_.poly)))));
    } else {
      throw UsageError("canonicalize needs --table or --poly");
    }
  }

  void derive() {
    no_csv("derive");
    auto poly = load_poly(a_.poly);
    for (const auto& h : a_.shifts) {
      const auto v = parse_vector(poly.field(), h);
      if (v.size() != poly.n()) throw Error("shift has " + std::to_string(v.size()) + " coordinates");
      poly = additive_derivative(poly, v);
    }
    const auto dd = degree_and_depth(poly);
    emit({{"poly", to_json(poly)}, {"degree", dd.degree}, {"depth", dd.depth}});
  }

  void gowers() {
    GowersOptions opts;
    opts.jobs = a_.jobs;
    if (budget_given_) opts.budget = a_.budget;
    if (!a_.method.empty()) opts.method = parse_gowers_method(a_.method);
    if (!given("gowers", "--d")) throw UsageError("gowers needs --d");
    GowersResult r;
    if (a_.table.empty() && !a_.poly.empty()) {
      r = gowers_norm_phase(load_poly(a_.poly), a_.d, opts);
    } else {
      r = gowers_norm(load_function("gowers"), a_.d, opts);
    }
    if (csv()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.norm);
      out_ << "norm,d,method,count\n" << buf << "," << r.d << "," << to_string(r.method) << "," << r.count << "\n";
      return;
    }
    emit(to_json(r));
  }

  void correlate() {
    no_csv("correlate");
    const auto f = load_function("correlate");
    if (a_.q.empty()) throw UsageError("correlate needs --q");
    const auto q = load_classical(a_.q);
    emit({{"corr", correlation(f, q)}});
  }

  void fourier() {
    const auto hat = fourier_fp(load_function("fourier"));
    if (csv()) {
      out_ << "index,a,re,im,abs\n";
      char buf[128];
      for (std::size_t i = 0; i < hat.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", hat[i].real(), hat[i].imag(), std::abs(hat[i]));
        out_ << i << ",\"" << format_vector(hat.space().point(i)) << "\"," << buf << "\n";
      }
      return;
    }
    emit(to_json(hat));
  }

  void counterexample() {
    no_csv("counterexample");
    const auto c = make_counterexample(field(), need_k(), need_n());
    if (c.boundary) note("k = p+1: boundary case, a classical correlate exists");
    emit(to_json(c.poly));
  }

  void quasisym() {
    no_csv("quasisym");
    const Field f = field();
    if (!a_.alpha.empty()) {
      const auto alpha = Composition::parse(a_.alpha);
      alpha.check(f);
      emit(to_json(quasisym_poly(f, alpha, need_n())));
      return;
    }
    const unsigned k = need_k();
    const unsigned n = need_n();
    const auto s = seed();
    Json reports = Json::array();
    bool ok = true;
    const auto add = [&](const OracleReport& r) {
      ok = ok && r.passed();
      reports.push_back(to_json(r));
    };
    add(verify_derivative_forms(f, k, n, a_.samples ? static_cast<unsigned>(a_.samples) : 200, s));
    add(verify_leading_coefficients(f, k, a_.trials, s));
    if (k >= f.p() + 1) add(verify_combined_leading(f, k, a_.trials, s));
    emit({{"p", f.p()}, {"k", k}, {"n", n}, {"seed", s}, {"passed", ok}, {"reports", reports}});
    if (!ok) status_ = 1;
  }

  void symmetrize() {
    no_csv("symmetrize");
    const auto poly = load_classical(a_.poly);
    if (!given("symmetrize", "--d")) throw UsageError("symmetrize needs --d");
    const unsigned target = a_.target ? a_.target : poly.n();
    const auto search = find_monochromatic(poly, a_.d, target, a_.node_budget);
    Json out{{"search", to_json(search)}};
    const auto& subset = search.subset ? *search.subset : search.largest;
    if (subset.empty()) {
      out["decomposition"] = nullptr;
      out["verification"] = nullptr;
    } else {
      FpVector y(poly.n() - subset.size(), 0);
      if (!a_.y.empty()) y = parse_vector(poly.field(), a_.y);
      out["decomposition"] = to_json(restrict_decompose(poly, a_.d, subset, y));
      const auto report = verify_decomposition(poly, a_.d, subset, seed());
      out["verification"] = to_json(report);
      out["seed"] = seed();
      if (!report.passed()) status_ = 1;
    }
    emit(out);
  }

  void hyperplane() {
    no_csv("hyperplane-extract");
    const auto poly = load_poly(a_.poly);
    const auto f = a_.table.empty() ? phase_function(poly) : load_function("hyperplane-extract");
    emit(to_json(extract_classical_correlate(f, poly)));
  }

  void search_max() {
    ComplexTable f = [&] {
      if (!a_.table.empty() || !a_.poly.empty()) return load_function("search-max");
      return phase_function(make_counterexample(field(), need_k(), need_n()).poly);
    }();
    unsigned d = a_.d;
    if (!given("search-max", "--d")) {
      if (!a_.k) throw UsageError("search-max needs --d (or --k for the counterexample family)");
      d = a_.k - 1;
    }
    auto m = mode();
    if (!m) {
      const auto count = ClassicalEnumeration(f.field(), f.n(), d).count();
      m = count && *count <= a_.budget ? SearchMode::exhaustive : SearchMode::sampled;
    }
    const std::uint64_t s = *m == SearchMode::sampled ? seed() : seed_;
    const auto r = max_correlation(f, d, *m, {a_.budget, s, a_.jobs});
    if (csv()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", r.best_value);
      out_ << "n,p,k,d,mode,best_value,candidates,seed\n"
           << r.n << "," << r.p << "," << a_.k << "," << r.d << "," << to_string(r.mode) << "," << buf << ","
           << r.candidates << "," << r.seed << "\n";
      return;
    }
    emit(to_json(r));
  }

  void zero_prob() {
    const Field f = field();
    if (!a_.r) throw UsageError("zero-prob needs --r");
    std::vector<Residue> coeffs(std::size_t{1} << a_.r, 0);
    if (a_.product) {
      coeffs.back() = 1;
    } else if (!a_.coeffs.empty()) {
      coeffs = parse_vector(f, a_.coeffs);
    } else {
      throw UsageError("zero-prob needs --coeffs or --product");
    }
    ZeroProbOptions opts;
    opts.mode = mode();
    if (a_.samples) opts.samples = a_.samples;
    opts.seed = seed();
    const auto r = zero_prob_experiment(f, a_.r, multiaffine_form(f, a_.r, coeffs), opts);
    if (csv()) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", r.probability, r.std_error, r.bound);
      out_ << "p,r,mode,probability,std_error,bound,zeros,evaluated,seed\n"
           << r.p << "," << r.r << "," << to_string(r.mode) << "," << buf << "," << r.zeros << ","
           << r.evaluated << "," << r.seed << "\n";
      return;
    }
    emit(to_json(r));
  }

  void decay() {
    const Field f = field();
    const unsigned k = need_k();
    DecayOptions opts;
    if (given("decay-curve", "--d")) opts.d = a_.d;
    opts.budget = a_.budget;
    opts.seed = seed();
    opts.jobs = a_.jobs;
    opts.control = a_.control;
    const unsigned hi = a_.n_max ? a_.n_max : need_n();
    const auto curve = decay_curve(f, k, a_.n_min, hi, opts);
    if (curve.boundary) note("k = p+1: boundary rows, no decay is expected");
    if (csv()) {
      out_ << decay_csv(curve);
      return;
    }
    emit(to_json(curve));
  }

  void verify() {
    no_csv("verify");
    VerifyConfig cfg;
    cfg.p = a_.p ? a_.p : 2;
    cfg.k = a_.k ? a_.k : 4;
    cfg.n = a_.n ? a_.n : 3;
    cfg.seed = seed();
    cfg.jobs = a_.jobs;
    cfg.trials = a_.trials;
    const auto r = run_verify(a_.suite, cfg);
    Json failures = Json::array();
    for (const auto& f : r.failures) failures.push_back({{"suite", f.suite}, {"check", f.check}, {"detail", f.detail}});
    emit({{"passed", r.passed()}, {"checks", r.checks}, {"failures", failures}, {"suites", r.suites},
          {"p", cfg.p}, {"k", cfg.k}, {"n", cfg.n}, {"seed", cfg.seed}});
    if (!r.passed()) status_ = 1;
  }

  const Args& a_;
  const CLI::App& app_;
  std::ostream& out_;
  std::ostream& err_;
  std::uint64_t seed_ = 0;
  bool seed_given_ = false;
  bool seed_noted_ = false;
  bool budget_given_ = false;
  int status_ = 0;
};

void build(CLI::App& app, Args& a) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", a.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", a.seed, "Seed for every random choice (default: fresh, reported)");
  app.add_option("--budget", a.budget, "Candidate or term budget");
  app.add_flag("--quiet", a.quiet, "Suppress diagnostics on stderr");
  app.add_option("--jobs", a.jobs, "Worker threads (0 = all cores)");

  const auto space = [&](CLI::App* s) {
    s->add_option("--p", a.p, "Prime");
    s->add_option("--n", a.n, "Number of variables");
  };
  const auto poly = [&](CLI::App* s, bool required) {
    auto* o = s->add_option("--poly", a.poly, "Polynomial JSON, inline or a file path");
    if (required) o->required();
  };
  const auto table = [&](CLI::App* s) {
    s->add_option("--table", a.table, "Function table JSON, inline or a file path");
  };

  auto* eval = app.add_subcommand("eval", "Evaluate a polynomial at a point or everywhere");
  space(eval);
  poly(eval, true);
  eval->add_option("--x", a.x, "Point, e.g. 1,0,2");

  auto* canon = app.add_subcommand("canonicalize", "Canonical form of a phase table");
  space(canon);
  table(canon);
  poly(canon, false);

  auto* derive = app.add_subcommand("derive", "Iterated additive derivative");
  space(derive);
  poly(derive, true);
  derive->add_option("--shift", a.shifts, "Shift vector (repeatable)");

  auto* gowers = app.add_subcommand("gowers", "Gowers U^d norm");
  space(gowers);
  poly(gowers, false);
  table(gowers);
  gowers->add_option("--d", a.d, "Order d >= 1");
  gowers->add_option("--method", a.method, "direct_enumeration, recursive_table or phase_histogram");

  auto* corr = app.add_subcommand("correlate", "Correlation with a classical phase");
  space(corr);
  poly(corr, false);
  table(corr);
  corr->add_option("--q", a.q, "Classical polynomial JSON");

  auto* fourier = app.add_subcommand("fourier", "Fourier transform over F_p^n");
  space(fourier);
  poly(fourier, false);
  table(fourier);

  auto* cex = app.add_subcommand("counterexample", "The degree k-1 family polynomial");
  space(cex);
  cex->add_option("--k", a.k, "Gowers order k > p")->required();

  auto* qs = app.add_subcommand("quasisym", "Quasisymmetric polynomial, or the derivative-form oracles");
  space(qs);
  qs->add_option("--alpha", a.alpha, "Composition, e.g. [2,1]");
  qs->add_option("--k", a.k, "Weight for the oracle reports");
  qs->add_option("--samples", a.samples, "Shift tuples per form (default 200)");
  qs->add_option("--trials", a.trials, "Prefixes / mixtures per check");

  auto* sym = app.add_subcommand("symmetrize", "Monochromatic restriction and decomposition");
  space(sym);
  poly(sym, true);
  sym->add_option("--d", a.d, "Uniformity d");
  sym->add_option("--m", a.target, "Target subset size (default n)");
  sym->add_option("--node-budget", a.node_budget, "Search node budget");
  sym->add_option("--y", a.y, "Assignment outside the subset (default zeros)");

  auto* hyper = app.add_subcommand("hyperplane-extract", "Classical correlate of a degree <= p phase");
  space(hyper);
  poly(hyper, true);
  table(hyper);

  auto* smax = app.add_subcommand("search-max", "Maximum correlation over classical polynomials");
  space(smax);
  poly(smax, false);
  table(smax);
  smax->add_option("--k", a.k, "Use the counterexample family with this k");
  smax->add_option("--d", a.d, "Degree bound (default k-1)");
  smax->add_option("--mode", a.mode, "exhaustive, sampled or auto")
      ->check(CLI::IsMember({"exhaustive", "sampled", "auto"}));

  auto* zp = app.add_subcommand("zero-prob", "Vanishing probability of a multiaffine form");
  space(zp);
  zp->add_option("--r", a.r, "Number of variables");
  zp->add_option("--coeffs", a.coeffs, "2^r coefficients indexed by subset bitmask");
  zp->add_flag("--product", a.product, "L = x_1 ... x_r");
  zp->add_option("--mode", a.mode, "exhaustive, sampled or auto")
      ->check(CLI::IsMember({"exhaustive", "sampled", "auto"}));
  zp->add_option("--samples", a.samples, "Monte Carlo samples");

  auto* dc = app.add_subcommand("decay-curve", "Maximum correlation of the family for a range of n");
  space(dc);
  dc->add_option("--k", a.k, "Gowers order k >= p+1");
  dc->add_option("--d", a.d, "Degree bound (default k-1)");
  dc->add_option("--n-min", a.n_min, "First n (default 1)");
  dc->add_option("--n-max", a.n_max, "Last n (default --n)");
  dc->add_flag("--control", a.control, "Replace the family by a random classical phase");

  auto* ver = app.add_subcommand("verify", "Run the invariant battery");
  space(ver);
  ver->add_option("--k", a.k, "Degree parameter k");
  ver->add_option("--suite", a.suite, "all or one suite name");
  ver->add_option("--trials", a.trials, "Random instances per property");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact computations with polynomial phases over F_p^n", "phasekit"};
  Args a;
  build(app, a);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Runner runner(a, app, out, err);
    return runner.dispatch(cmd);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace phasekit
