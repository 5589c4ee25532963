#include <CLI11.hpp>

#include <cmath>
#include <iostream>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "heegnerlab/heegnerlab.hpp"

using namespace heegnerlab;

namespace {

struct Common {
  std::string format = "tsv";
  unsigned workers = default_workers();
  bool timing = false;
};

void add_common(CLI::App* app, Common& c, bool parallel) {
  app->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"tsv", "csv", "json"}));
  if (parallel) app->add_option("--workers", c.workers, "Worker threads (default: HEEGNERLAB_WORKERS or all cores)")->check(CLI::PositiveNumber);
  app->add_flag("--timing", c.timing, "Print wall time per phase to stderr");
}

int emit(const RunReport& rep, const Common& c) {
  std::cout << render(rep, parse_format(c.format));
  return rep.all_pass() ? 0 : 1;
}

std::vector<std::uint64_t> parse_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    const auto v = std::stoull(item, &used);
    if (used != item.size()) throw std::invalid_argument("bad list item '" + item + "'");
    out.push_back(v);
  }
  return out;
}

std::string form_text(const BinaryQuadraticForm& f) {
  return "(" + std::to_string(f.a()) + "," + std::to_string(f.b()) + "," + std::to_string(f.c()) + ")";
}

// census / growth

struct CensusArgs {
  std::uint64_t min = 500'000, max = 1'000'000, bucket = 5555;
  std::string thresholds = "1,3,5,7,9";
  bool descending = false, by_range = false;

  CensusConfig config() const {
    CensusConfig cfg;
    cfg.d_min = min;
    cfg.d_max = max;
    cfg.bucket = bucket;
    cfg.thresholds = parse_list(thresholds);
    cfg.descending = descending;
    cfg.by_range = by_range;
    cfg.validate();
    return cfg;
  }
};

void add_census_options(CLI::App* app, CensusArgs& a) {
  app->add_option("--min", a.min, "Smallest D");
  app->add_option("--max", a.max, "Largest D");
  app->add_option("--bucket", a.bucket, "Discriminants per row (or D-width with --by-range)");
  app->add_option("--thresholds", a.thresholds, "Ascending odd thresholds C, comma separated");
  app->add_flag("--descending", a.descending, "Process D from max downward");
  app->add_flag("--by-range", a.by_range, "Bucket by D-interval instead of by count");
}

json census_config_json(const CensusConfig& cfg) {
  return {{"min", cfg.d_min}, {"max", cfg.d_max}, {"bucket", cfg.bucket}, {"thresholds", cfg.thresholds},
          {"descending", cfg.descending}, {"by_range", cfg.by_range}};
}

int run_census_cmd(const CensusArgs& a, const Common& c) {
  const auto cfg = a.config();
  CensusResult res;
  {
    PhaseTimer t("census", c.timing);
    res = run_census(cfg, c.workers);
  }
  RunReport rep;
  rep.subcommand = "census";
  rep.config = census_config_json(cfg);
  Table rows{"rows", {"D_count"}, {}};
  for (auto th : cfg.thresholds) rows.columns.push_back("h_odd<=" + std::to_string(th));
  for (const auto& r : res.rows) {
    std::vector<json> cells{r.count_d};
    for (auto v : r.counts) cells.push_back(v);
    rows.add(cells);
  }
  std::vector<json> corr{"correlation"};
  for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
    if (res.rows.size() < 2) {
      corr.push_back("NA");
      continue;
    }
    try {
      corr.push_back(format_sig(correlation(res.rows, k)));
    } catch (const std::invalid_argument&) {
      corr.push_back("NA");
    }
  }
  if (parse_format(c.format) == OutputFormat::json) {
    rep.tables.push_back(rows);
    Table ct{"correlation", {}, {}};
    std::vector<json> vals;
    for (std::size_t k = 0; k < cfg.thresholds.size(); ++k) {
      ct.columns.push_back(rows.columns[k + 1]);
      vals.push_back(corr[k + 1] == "NA" ? json(nullptr) : json(std::stod(corr[k + 1].get<std::string>())));
    }
    ct.add(vals);
    rep.tables.push_back(ct);
  } else {
    rows.add(corr);
    rep.tables.push_back(rows);
  }
  return emit(rep, c);
}

int run_growth_cmd(const CensusArgs& a, std::size_t threshold_index, std::size_t trim, const Common& c) {
  const auto cfg = a.config();
  if (threshold_index >= cfg.thresholds.size()) throw std::invalid_argument("--threshold-index out of range");
  CensusResult res;
  {
    PhaseTimer t("census", c.timing);
    res = run_census(cfg, c.workers);
  }
  if (trim + 3 > res.rows.size()) throw std::invalid_argument("need at least 3 rows after --trim");
  const auto g = growth_probe(res.rows, threshold_index, trim);
  RunReport rep;
  rep.subcommand = "growth";
  rep.config = census_config_json(cfg);
  rep.config["threshold"] = cfg.thresholds[threshold_index];
  rep.config["trim"] = trim;
  Table t{"fits", {"model", "delta", "intercept", "kappa", "rms_residual", "best"}, {}};
  for (std::size_t i = 0; i < g.fits.size(); ++i) {
    const auto& f = g.fits[i];
    t.add({model_name(f.model), f.delta, f.intercept, f.kappa, f.rms_residual, i == g.best});
  }
  rep.tables.push_back(t);
  return emit(rep, c);
}

// classgroup / heegner

int run_classgroup_cmd(std::int64_t disc, const Common& c) {
  const auto g = class_group(Discriminant(disc));
  const auto fmt = parse_format(c.format);
  if (fmt == OutputFormat::json) {
    std::cout << class_group_json(g).dump(2) << '\n';
    return 0;
  }
  RunReport rep;
  rep.subcommand = "classgroup";
  std::string divs;
  for (auto d : g.elementary_divisors()) divs += (divs.empty() ? "" : " ") + std::to_string(d);
  Table s{"summary", {"disc", "h", "elementary_divisors"}, {}};
  s.add({g.disc().value(), g.h(), divs});
  Table f{"forms", {"a", "b", "c", "order"}, {}};
  std::vector<std::size_t> idx(g.h());
  std::iota(idx.begin(), idx.end(), 0u);
  std::sort(idx.begin(), idx.end(), [&](auto x, auto y) { return g[x] < g[y]; });
  for (auto i : idx) f.add({g[i].a(), g[i].b(), g[i].c(), g.order_of(i)});
  rep.tables = {s, f};
  return emit(rep, c);
}

int run_heegner_cmd(std::int64_t disc, std::uint64_t level, bool orbits, const Common& c) {
  const Discriminant d(disc);
  if (level < 1) throw std::invalid_argument("--level must be >= 1");
  if (!heegner_condition(d, level))
    throw std::invalid_argument("Heegner condition fails for disc " + std::to_string(disc) + ", level " + std::to_string(level));
  const auto sys = build_system(d, level);
  const auto& pic = sys.pic();
  RunReport rep;
  rep.subcommand = "heegner";
  rep.config = {{"disc", disc}, {"level", level}, {"orbits", orbits}};

  Table s{"summary", {"disc", "level", "h", "roots", "points"}, {}};
  s.add({disc, level, sys.h(), sys.roots().size(), sys.indices().size()});
  Table r{"roots", {"root_mod_2N"}, {}};
  for (auto x : sys.roots()) r.add({x});
  rep.tables = {s, r};

  // action axioms and orbit sizes, checked exhaustively
  std::string bad;
  for (const auto& y : sys.indices()) {
    if (star_act(sys, 0, y) != y) bad = "identity fails at (" + std::to_string(y.root) + "," + std::to_string(y.cls) + ")";
    for (std::size_t b = 0; b < sys.h() && bad.empty(); ++b)
      for (std::size_t k = 0; k < sys.h() && bad.empty(); ++k)
        if (star_act(sys, b, star_act(sys, k, y)) != star_act(sys, pic.multiply(b, k), y))
          bad = "composition fails at root " + std::to_string(y.root) + ", classes " + std::to_string(b) + "," + std::to_string(k);
    if (!bad.empty()) break;
  }
  rep.verdicts.push_back({"action_axioms", bad.empty(), bad});
  const auto orb = galois_orbits(sys);
  std::string orbit_bad;
  for (const auto& o : orb)
    if (o.size() != sys.h()) orbit_bad = "orbit of size " + std::to_string(o.size()) + " != h = " + std::to_string(sys.h());
  rep.verdicts.push_back({"orbit_size_equals_h", orbit_bad.empty(), orbit_bad});
  if (is_squarefree(level)) {
    const std::size_t expected = std::size_t{1} << omega(level);
    rep.verdicts.push_back({"root_count_2^omega(N)", sys.roots().size() == expected,
                            sys.roots().size() == expected ? "" : "expected " + std::to_string(expected)});
  }
  if (orbits) {
    Table o{"orbits", {"orbit", "root_mod_2N", "class", "form"}, {}};
    for (std::size_t i = 0; i < orb.size(); ++i)
      for (const auto& y : orb[i]) o.add({i, y.root, y.cls, form_text(pic[y.cls])});
    rep.tables.push_back(o);
  }
  return emit(rep, c);
}

// verify

int run_idempotents_cmd(std::uint32_t p, std::uint32_t r, const Common& c) {
  const ElementaryAbelianGroup g(p, r);
  RunReport rep;
  rep.subcommand = "verify idempotents";
  rep.config = {{"p", p}, {"r", r}};
  const auto sum = verify_idempotent_sum(g);
  Table t{"counts", {"p", "r", "index_p_subgroups", "(p^r-1)/(p-1)", "(p^(r-1)-1)/(p-1)", "coefficient"}, {}};
  t.add({p, r, sum.subgroup_count, sum.expected_count, sum.misquoted_count, sum.coefficient.str()});
  rep.tables.push_back(t);
  rep.verdicts.push_back({"subgroup_count", sum.subgroup_count == sum.expected_count,
                          sum.subgroup_count == sum.expected_count ? "" : "enumerated " + std::to_string(sum.subgroup_count)});
  rep.verdicts.push_back({"sum_identity", sum.holds, sum.counterexample});
  if (r >= 2) {
    const auto prod = verify_idempotent_product(g);
    rep.verdicts.push_back({"product_identity", prod.holds, prod.counterexample});
    rep.verdicts.push_back({"transversal_count", prod.transversal_count_holds, ""});
  }
  return emit(rep, c);
}

int run_norm_cmd(std::uint32_t p, std::uint32_t r, std::uint64_t instances, std::uint64_t seed, const Common& c) {
  const ElementaryAbelianGroup g(p, r);
  RunReport rep;
  rep.subcommand = "verify norm";
  rep.config = {{"p", p}, {"r", r}, {"instances", instances}, {"seed", seed}};
  Table t{"instances", {"instance", "module_size", "quotient_size", "target_size", "holds"}, {}};
  std::string bad;
  for (std::uint64_t i = 0; i < instances; ++i) {
    std::mt19937_64 rng(mix_seed(seed ^ mix_seed(i)));
    const auto m = random_gmodule(g, rng);
    const auto v = verify_norm_decomposition(m);
    t.add({i, m.size(), v.quotient_size, v.target_size, v.holds()});
    if (!v.holds() && bad.empty()) bad = "instance " + std::to_string(i) + ": " + v.counterexample;
  }
  rep.tables.push_back(t);
  rep.verdicts.push_back({"norm_decomposition", bad.empty(), bad});
  return emit(rep, c);
}

int run_degrees_cmd(std::uint64_t order, std::size_t length, std::uint64_t trials, std::uint64_t seed, std::uint64_t budget,
                    const Common& c) {
  if (order < 1 || order > 64) throw std::invalid_argument("--order must be in [1, 64]");
  if (length < 1) throw std::invalid_argument("--length must be >= 1");
  DegreeSweepReport s;
  {
    PhaseTimer t("degrees", c.timing);
    s = sweep_degree_identity(order, length, trials, seed, budget);
  }
  RunReport rep;
  rep.subcommand = "verify degrees";
  rep.config = {{"max_order", order}, {"max_length", length}, {"trials", trials}, {"seed", seed}, {"budget", budget}};
  Table t{"summary", {"groups", "chains_checked", "exhaustive_lengths", "sampled_lengths", "failures"}, {}};
  t.add({s.groups, s.chains_checked, s.exhaustive_lengths, s.sampled_lengths, s.failures});
  rep.tables.push_back(t);
  rep.verdicts.push_back({"degree_identity", s.failures == 0, s.first_counterexample});
  return emit(rep, c);
}

int run_gl2_bound_cmd(std::uint32_t max_n, std::uint64_t trials, std::uint64_t seed, bool all_rows, const Common& c) {
  BoundSweepReport s;
  {
    PhaseTimer t("gl2-bound", c.timing);
    s = sweep_gl2_bound(max_n, trials, seed, c.workers);
  }
  RunReport rep;
  rep.subcommand = "verify gl2-bound";
  rep.config = {{"max_n", max_n}, {"trials", trials}, {"seed", seed}};
  struct PerN {
    std::uint64_t instances = 0, nontrivial = 0, violations = 0;
    double max_exponent = 0;
  };
  std::map<std::uint32_t, PerN> per_n;
  Table rows{"instances", {"n", "trial", "gamma_order", "index", "w_size", "verdict"}, {}};
  std::string bad;
  for (const auto& row : s.rows) {
    auto& a = per_n[row.n];
    ++a.instances;
    if (row.report.w_size > 1) ++a.nontrivial;
    if (!row.report.holds) {
      ++a.violations;
      if (bad.empty())
        bad = "n=" + std::to_string(row.n) + " trial=" + std::to_string(row.trial) + " |W|=" + std::to_string(row.report.w_size) +
              " I=" + std::to_string(row.report.index);
    }
    a.max_exponent = std::max(a.max_exponent, row.report.exponent);
    if (all_rows)
      rows.add({row.n, row.trial, row.report.gamma_order, row.report.index, row.report.w_size, row.report.holds ? "PASS" : "FAIL"});
  }
  Table summary{"summary", {"n", "instances", "nontrivial", "violations", "max_log|W|/logI"}, {}};
  for (const auto& [n, a] : per_n) summary.add({n, a.instances, a.nontrivial, a.violations, a.max_exponent});
  summary.add({"all", s.instances, s.nontrivial_instances, s.violations, s.max_exponent});
  rep.tables.push_back(summary);
  if (all_rows) rep.tables.push_back(rows);
  rep.verdicts.push_back({"|W|<=I^3", s.violations == 0, bad});
  return emit(rep, c);
}

int run_gl2_example_cmd(std::uint32_t ell, std::uint32_t k, std::uint32_t cap, const Common& c) {
  FamilyReport f = example_family(ell, k, cap);
  RunReport rep;
  rep.subcommand = "verify gl2-example";
  rep.config = {{"ell", ell}, {"k", k}, {"cap", cap}};
  const double l = ell, kk = k;
  const auto order_formula = static_cast<std::uint64_t>(std::llround(std::pow(l, 5 * kk) * (1 - 1 / l)));
  const auto index_formula = static_cast<std::uint64_t>(std::llround(std::pow(l, 3 * kk) * (1 - 1 / (l * l))));
  Table t{"family", {"n", "gamma_order", "l^5k(1-1/l)", "index", "l^3k(1-l^-2)", "w_size", "log|W|/logI"}, {}};
  t.add({f.gamma.modulus(), f.order, order_formula, f.index, index_formula, f.w.size(), f.exponent});
  rep.tables.push_back(t);
  rep.verdicts.push_back({"order_formula", f.order == order_formula, ""});
  rep.verdicts.push_back({"index_formula", f.index == index_formula, ""});
  rep.verdicts.push_back({"invariant_abelian", is_invariant(f.gamma, f.w) && acts_abelian(f.gamma, f.w), ""});
  const auto b = verify_bound(f.gamma, f.w);
  rep.verdicts.push_back({"|W|<=I^3", b.holds, ""});
  rep.verdicts.push_back({"exponent>4/3", f.exponent > 4.0 / 3.0, ""});
  return emit(rep, c);
}

int run_classgroups_cmd(std::uint64_t max_d, const Common& c) {
  RunReport rep;
  rep.subcommand = "verify classgroups";
  rep.config = {{"max_d", max_d}};
  const auto discs = fundamental_discriminants(1, max_d);
  std::vector<std::string> errors(discs.size());
  {
    PhaseTimer t("classgroups", c.timing);
    parallel_for(discs.size(), c.workers, [&](std::size_t i) {
      const auto& d = discs[i];
      const auto g = class_group(d);
      const auto h = g.h();
      std::string e;
      if (class_number(d) != h) e = "class_number disagrees with the group";
      for (std::size_t x = 0; x < h && e.empty(); ++x) {
        if (g.multiply(0, x) != x) e = "identity";
        if (g.multiply(x, g.inverse_of(x)) != 0) e = "inverse";
        for (std::size_t y = 0; y < h && e.empty(); ++y) {
          if (g.multiply(x, y) != g.multiply(y, x)) e = "commutativity";
          if (h <= 60)
            for (std::size_t z = 0; z < h && e.empty(); ++z)
              if (g.multiply(g.multiply(x, y), z) != g.multiply(x, g.multiply(y, z))) e = "associativity";
        }
      }
      const int t_primes = omega(d.magnitude());
      if (e.empty() && !genus_consistent(d, h)) e = "2^(t-1) does not divide h";
      if (e.empty() && two_rank(g) != t_primes - 1) e = "two_rank != t-1";
      if (!e.empty()) errors[i] = "d=" + std::to_string(d.value()) + ": " + e;
    }, 64);
  }
  std::string bad;
  std::uint64_t failures = 0;
  for (const auto& e : errors)
    if (!e.empty()) {
      ++failures;
      if (bad.empty()) bad = e;
    }
  Table t{"summary", {"max_d", "discriminants", "failures"}, {}};
  t.add({max_d, discs.size(), failures});
  rep.tables.push_back(t);
  rep.verdicts.push_back({"class_groups", failures == 0, bad});
  return emit(rep, c);
}

// probe / erratum

int run_probe_cmd(std::uint64_t p, std::int64_t a, std::int64_t b, std::optional<std::uint64_t> bound, const Common& c) {
  const CurveOverFp e(p, a, b);
  const auto n = naive_count(e);
  const std::int64_t trace = static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(n);
  RunReport rep;
  rep.subcommand = "probe";
  rep.config = {{"p", p}, {"a", e.a()}, {"b", e.b()}, {"smooth_bound", bound ? json(*bound) : json(nullptr)}};
  Table t{"probe", {"p", "n", "a", "delta", "verdict", "h", "h_odd"}, {}};
  if (trace == 0) {
    t.add({p, n, trace, "NA", "supersingular", "NA", "NA"});
  } else {
    const auto delta = frobenius_disc(e);
    const auto v = liftable_filter(delta, bound.value_or(static_cast<std::uint64_t>(-delta)));
    if (v.accept) {
      const auto h = class_number(*v.field_disc);
      t.add({p, n, trace, delta, "accept", h, odd_part(h)});
    } else {
      t.add({p, n, trace, delta, "reject", "NA", "NA"});
    }
  }
  rep.tables.push_back(t);
  return emit(rep, c);
}

int run_erratum_cmd(const Common& c) {
  RunReport rep;
  rep.subcommand = "erratum";

  Table counts{"index_p_subgroup_count",
               {"p", "r", "enumerated", "(p^r-1)/(p-1)", "quoted (p^(r-1)-1)/(p-1)", "sum_identity_with_enumerated"}, {}};
  bool count_ok = true;
  for (std::uint32_t p : {2u, 3u, 5u})
    for (std::uint32_t r : {2u, 3u}) {
      const auto s = verify_idempotent_sum(ElementaryAbelianGroup(p, r));
      counts.add({p, r, s.subgroup_count, s.expected_count, s.misquoted_count, s.holds});
      count_ok = count_ok && s.holds && s.subgroup_count == s.expected_count && s.misquoted_count != s.expected_count;
    }
  rep.tables.push_back(counts);
  rep.verdicts.push_back({"quoted_subgroup_count_is_wrong", count_ok, ""});

  Table quad{"quadratic_subextensions_of_(Z/2)^r", {"r", "enumerated", "2^r-1", "quoted 2^(r-1)-1"}, {}};
  bool quad_ok = true;
  for (std::uint32_t r = 1; r <= 5; ++r) {
    const auto n = index_p_subgroups(ElementaryAbelianGroup(2, r)).size();
    quad.add({r, n, (1u << r) - 1, (1u << (r - 1)) - 1});
    quad_ok = quad_ok && n == (1u << r) - 1;
  }
  rep.tables.push_back(quad);
  rep.verdicts.push_back({"quoted_quadratic_count_is_wrong", quad_ok, ""});

  Table fam{"diagonal_vs_scalar_mod_l",
            {"l", "|(Z/l)^*|*|M2(Z/l)|", "scalar_order", "scalar_abelian_on_V", "diagonal_order", "diagonal_abelian_on_V"}, {}};
  bool fam_ok = true;
  for (std::uint32_t ell : {2u, 3u, 5u}) {
    const auto s = example_family(ell, 1);
    const auto d = diagonal_family(ell, 1);
    const std::uint64_t predicted = static_cast<std::uint64_t>(ell - 1) * ell * ell * ell * ell;
    const bool sa = acts_abelian(s.gamma, s.w), da = acts_abelian(d.gamma, d.w);
    fam.add({ell, predicted, s.order, sa, d.order, da});
    fam_ok = fam_ok && s.order == predicted && sa && (ell == 2 ? da : (!da && d.order != predicted));
  }
  rep.tables.push_back(fam);
  rep.verdicts.push_back({"diagonal_family_must_be_scalar", fam_ok, ""});
  return emit(rep, c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"heegnerlab: class groups, Heegner orbits and related verifications"};
  app.require_subcommand(1);
  Common common;

  CensusArgs census_args;
  auto* census = app.add_subcommand("census", "Tabulate h^odd over fundamental discriminants");
  add_census_options(census, census_args);
  add_common(census, common, true);

  CensusArgs growth_args;
  std::size_t threshold_index = 0, trim = 0;
  auto* growth = app.add_subcommand("growth", "Fit census counts against growth models (exploratory)");
  add_census_options(growth, growth_args);
  growth->add_option("--threshold-index", threshold_index, "Which threshold column to fit");
  growth->add_option("--trim", trim, "Drop this many leading rows before fitting");
  add_common(growth, common, true);

  std::int64_t cg_disc = 0;
  auto* cg = app.add_subcommand("classgroup", "Print the class group of a discriminant");
  cg->add_option("--disc", cg_disc, "Negative discriminant")->required();
  add_common(cg, common, false);

  std::int64_t h_disc = 0;
  std::uint64_t h_level = 1;
  bool h_orbits = false;
  auto* heeg = app.add_subcommand("heegner", "Heegner points of a discriminant and level");
  heeg->add_option("--disc", h_disc, "Negative discriminant")->required();
  heeg->add_option("--level", h_level, "Level N")->required();
  heeg->add_flag("--orbits", h_orbits, "Print the Galois orbit decomposition");
  add_common(heeg, common, false);

  auto* verify = app.add_subcommand("verify", "Verification suites");
  verify->require_subcommand(1);

  std::uint32_t id_p = 2, id_r = 2;
  auto* idem = verify->add_subcommand("idempotents", "Idempotent sum/product identities in Q[F_p^r]");
  idem->add_option("--p", id_p, "Prime p")->required();
  idem->add_option("--r", id_r, "Rank r")->required();
  add_common(idem, common, false);

  std::uint32_t nm_p = 2, nm_r = 2;
  std::uint64_t nm_instances = 20, nm_seed = 1;
  auto* norm = verify->add_subcommand("norm", "Norm decomposition on seeded random G-modules");
  norm->add_option("--p", nm_p, "Prime p")->required();
  norm->add_option("--r", nm_r, "Rank r")->required();
  norm->add_option("--instances", nm_instances, "Number of random modules");
  norm->add_option("--seed", nm_seed, "Random seed");
  add_common(norm, common, false);

  std::uint64_t dg_order = 16, dg_trials = 200, dg_seed = 1, dg_budget = 2'000'000;
  std::size_t dg_length = 4;
  auto* deg = verify->add_subcommand("degrees", "Degree identity for chains in abelian groups");
  deg->add_option("--order", dg_order, "Check every abelian group of order <= N");
  deg->add_option("--length", dg_length, "Maximum chain length");
  deg->add_option("--trials", dg_trials, "Random chains per over-budget (group, length)");
  deg->add_option("--seed", dg_seed, "Random seed");
  deg->add_option("--budget", dg_budget, "Enumerate exhaustively when #subgroups^length <= budget");
  add_common(deg, common, false);

  std::uint32_t gb_max_n = 12;
  std::uint64_t gb_trials = 200, gb_seed = 42;
  bool gb_rows = false;
  auto* gb = verify->add_subcommand("gl2-bound", "|W| <= I(Gamma)^3 over random subgroups of GL2(Z/n)");
  gb->add_option("--max-n", gb_max_n, "Largest modulus");
  gb->add_option("--trials", gb_trials, "Random subgroups per modulus");
  gb->add_option("--seed", gb_seed, "Random seed");
  gb->add_flag("--instances", gb_rows, "Also print one row per (Gamma, W) instance");
  add_common(gb, common, true);

  std::uint32_t ge_ell = 3, ge_k = 1, ge_cap = 81;
  auto* ge = verify->add_subcommand("gl2-example", "The scalar-mod-l^k family in GL2(Z/l^2k)");
  ge->add_option("--ell", ge_ell, "Prime l")->required();
  ge->add_option("--k", ge_k, "Exponent k")->required();
  ge->add_option("--cap", ge_cap, "Largest modulus l^2k allowed");
  add_common(ge, common, false);

  std::uint64_t cgs_max = 10'000;
  auto* cgs = verify->add_subcommand("classgroups", "Class group laws and genus theory for fundamental |d| <= max");
  cgs->add_option("--max-d", cgs_max, "Largest |d|");
  add_common(cgs, common, true);

  std::uint64_t pr_p = 0;
  std::int64_t pr_a = 0, pr_b = 0;
  std::optional<std::uint64_t> pr_bound;
  auto* probe = app.add_subcommand("probe", "Point count, Frobenius discriminant and lift filter");
  probe->add_option("--p", pr_p, "Odd prime")->required();
  probe->add_option("--a", pr_a, "Coefficient a")->required();
  probe->add_option("--b", pr_b, "Coefficient b")->required();
  probe->add_option("--smooth-bound", pr_bound, "Smoothness bound B (default: no bound)");
  add_common(probe, common, false);

  auto* erratum = app.add_subcommand("erratum", "Documented discrepancies with brute-force evidence");
  add_common(erratum, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*census) return run_census_cmd(census_args, common);
    if (*growth) return run_growth_cmd(growth_args, threshold_index, trim, common);
    if (*cg) return run_classgroup_cmd(cg_disc, common);
    if (*heeg) return run_heegner_cmd(h_disc, h_level, h_orbits, common);
    if (*idem) return run_idempotents_cmd(id_p, id_r, common);
    if (*norm) return run_norm_cmd(nm_p, nm_r, nm_instances, nm_seed, common);
    if (*deg) return run_degrees_cmd(dg_order, dg_length, dg_trials, dg_seed, dg_budget, common);
    if (*gb) return run_gl2_bound_cmd(gb_max_n, gb_trials, gb_seed, gb_rows, common);
    if (*ge) return run_gl2_example_cmd(ge_ell, ge_k, ge_cap, common);
    if (*cgs) return run_classgroups_cmd(cgs_max, common);
    if (*probe) return run_probe_cmd(pr_p, pr_a, pr_b, pr_bound, common);
    if (*erratum) return run_erratum_cmd(common);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::range_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
