#include "recipro/cli.hpp"

#include <map>
#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "recipro/catalog.hpp"
#include "recipro/dsl.hpp"
#include "recipro/error.hpp"
#include "recipro/numeric.hpp"
#include "recipro/report.hpp"

namespace recipro::cli {

namespace {

using nlohmann::json;

const std::map<std::string, std::string> kSummaries{
    {"verify-conserved", "check that a conserved pair holds on its system"},
    {"verify-closed", "check that the reciprocal one-form is closed"},
    {"build-transform", "build a reciprocal transform and print its relations"},
    {"apply", "transform a system into the new variables"},
    {"round-trip", "apply a transform and its inverse, compare with the original"},
    {"potentialize", "rewrite a system through a potential and check the result"},
    {"lax-check", "check that a Lax pair is compatible modulo its system"},
    {"miura", "check the Miura map between the two hierarchies"},
    {"scenario", "run named scenarios and compare with expected verdicts"},
    {"latex", "render a system as LaTeX"},
};

const std::vector<std::string> kCommands{"verify-conserved", "verify-closed", "build-transform", "apply", "round-trip",
                                         "potentialize",     "lax-check",     "miura",           "scenario", "latex"};

struct Options {
  std::string command;
  std::string target;
  std::string file;
  std::string tex;
  std::string k;
  bool json = false;
  bool broken = false;
  std::size_t budget = kDefaultBudget;
  double tol = 1e-6;
  int jobs = 1;
  int n = 1;
};

struct Outcome {
  std::vector<Report> reports;
  json extra = json::object();
  std::string text;
  std::string latex;
  std::optional<bool> ok;  // overrides the conjunction of the reports
  bool budget_exceeded = false;
};

// thrown for bad targets and flag combinations
struct InputError : Error {
  using Error::Error;
  const char* kind() const noexcept override { return "InputError"; }
};

std::string system_text(const PDESystem& sys) {
  std::ostringstream os;
  os << sys.name() << " on (";
  const auto& iv = sys.space().independents();
  for (std::size_t i = 0; i < iv.size(); ++i) os << (i ? ", " : "") << iv[i];
  os << ")\n";
  for (const auto& e : sys.equations()) os << "  " << (e.definition ? "def " : "") << e.label << ": " << to_text(e.expr) << " = 0\n";
  return os.str();
}

std::string lax_text(const LaxPair& lp) {
  std::ostringstream os;
  os << lp.name << "\n";
  for (const auto& e : lp.equations()) os << "  " << e.label << ": " << to_text(e.expr) << " = 0\n";
  return os.str();
}

Rational parse_rational(const std::string& s) {
  try {
    Rational q(s);
    q.canonicalize();
    return q;
  } catch (const std::exception&) {
    throw InputError("--k expects a rational number, got '" + s + "'");
  }
}

// empty optional: symbolic k
std::optional<Rational> k_value(const Options& o, bool allow_symbolic) {
  if (o.k.empty()) return Rational(2);
  if (o.k == "k") {
    if (!allow_symbolic) throw InputError("symbolic k is only accepted by build-transform and verify-closed");
    return std::nullopt;
  }
  return parse_rational(o.k);
}

void require_target(const Options& o, const std::vector<std::string>& allowed) {
  if (std::find(allowed.begin(), allowed.end(), o.target) != allowed.end()) return;
  std::string list;
  for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
  throw InputError(o.command + ": unknown target '" + o.target + "' (catalog targets: " + list + ")");
}

void no_break(const Options& o) {
  if (o.broken) throw InputError("--break-constraint applies to lax-check chh/mchh and miura only");
}

Report numeric_report(const std::string& name, const std::vector<std::pair<std::string, Expression>>& exprs, const SolvedSystem& s,
                      double tol) {
  Report r;
  r.name = name;
  for (const auto& [label, e] : exprs) {
    NumericCheck c = numeric_zero_check(e, s, 10, tol);
    std::ostringstream os;
    os << label << ": max |value| = " << std::setprecision(3) << static_cast<double>(c.max_abs) << " over " << c.samples << " points";
    if (c.poles_skipped) os << " (" << c.poles_skipped << " poles skipped)";
    r.notes.push_back(os.str());
    if (!c.ok) r.holds = false;
  }
  return r;
}

OneForm form_of(const ReciprocalTransform& t) {
  std::vector<std::pair<std::string, Expression>> c(t.data().one_form.begin(), t.data().one_form.end());
  return OneForm(t.data().target_pivot, c);
}

Outcome closed_outcome(const OneForm& form, const PDESystem& sys, const Options& o) {
  SolvedSystem s = solve_leading(sys, std::nullopt, o.budget);
  Outcome out;
  out.reports.push_back(verify_closed(form, s));
  std::vector<std::pair<std::string, Expression>> cross;
  const auto& c = form.coefficients;
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = i + 1; j < c.size(); ++j)
      cross.emplace_back("D_" + c[i].first + " " + c[j].first + " coefficient - D_" + c[j].first + " " + c[i].first + " coefficient",
                         s.space().total_derivative(c[j].second, intern_var(c[i].first), false) -
                             s.space().total_derivative(c[i].second, intern_var(c[j].first), false));
  out.reports.push_back(numeric_report("numeric closure of d" + form.target, cross, s, o.tol));
  return out;
}

Outcome conserved_outcome(const ConservedPair& pair, const PDESystem& sys, const Options& o) {
  SolvedSystem s = solve_leading(sys, std::nullopt, o.budget);
  Outcome out;
  out.reports.push_back(verify_conserved(pair, s));
  Expression res = s.space().total_derivative(pair.a(), intern_var(pair.x()), false) -
                   s.space().total_derivative(pair.a_prime(), intern_var(pair.x_prime()), false);
  out.reports.push_back(numeric_report("numeric conservation on " + sys.name(), {{"residual", res}}, s, o.tol));
  return out;
}

Report titled(Report r, const std::string& name) {
  r.name = name;
  return r;
}

ApplyOptions apply_options(const Options& o) {
  ApplyOptions a;
  a.budget = o.budget;
  return a;
}

void add_system(Outcome& out, const PDESystem& sys) {
  out.extra["system"] = to_json(sys);
  out.text += system_text(sys);
  out.latex += system_latex(sys);
}

// ---- commands ----

Outcome verify_conserved_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  if (doc) return conserved_outcome(doc->conserved_pair(o.target), doc->system(doc->conserved_block(o.target).system), o);
  require_target(o, {"chh", "chh-time", "mchh"});
  if (o.target == "chh") return conserved_outcome(catalog::chh_pair(o.n), catalog::chh(o.n), o);
  if (o.target == "chh-time") return conserved_outcome(catalog::chh_time_pair(o.n), catalog::chh(o.n), o);
  return conserved_outcome(catalog::mchh_pair(o.n), catalog::mchh(o.n), o);
}

Outcome verify_closed_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  if (doc) return closed_outcome(form_of(doc->transform(o.target)), doc->transform_source(o.target), o);
  require_target(o, {"chh", "mchh", "n0"});
  if (o.target == "chh") return closed_outcome(catalog::chh_one_form(o.n), catalog::chh(o.n), o);
  if (o.target == "mchh") return closed_outcome(catalog::mchh_one_form(o.n), catalog::mchh(o.n), o);
  Outcome out;
  out.reports.push_back(catalog::verify_n0_closure(k_value(o, true)));
  return out;
}

Outcome build_transform_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  std::optional<ReciprocalTransform> t;
  if (doc) {
    t = doc->transform(o.target);
  } else {
    require_target(o, {"chh", "mchh", "n0"});
    if (o.target == "chh") t = catalog::chh_transform(o.n);
    else if (o.target == "mchh") t = catalog::mchh_transform(o.n);
    else t = catalog::n0_reciprocal(k_value(o, true));
  }
  Outcome out;
  Report r;
  r.name = "build-transform " + o.target;
  for (const auto& nt : t->data().notes) r.notes.push_back(nt);
  out.reports.push_back(r);
  out.extra["transform"] = to_json(*t, std::min(2, t->target().max_order()));
  std::ostringstream os;
  os << "d" << t->data().target_pivot << " =";
  bool first = true;
  for (const auto& [v, c] : t->data().one_form) {
    os << (first ? " " : " + ") << "(" << to_text(c) << ") d" << v;
    first = false;
  }
  os << "\n";
  for (const auto& [f, e] : t->data().relations) os << "  " << f << " = " << to_text(e) << "\n";
  out.text = os.str();
  for (const auto& [f, e] : t->data().relations) out.latex += f + " &= " + to_latex(e) + " \\\\\n";
  return out;
}

Outcome apply_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  Outcome out;
  if (doc) {
    PDESystem res = doc->transform(o.target).apply(doc->transform_source(o.target), apply_options(o));
    Report r;
    r.name = "apply " + o.target;
    r.notes.push_back("target equations: " + std::to_string(res.equations().size()));
    out.reports.push_back(r);
    add_system(out, res);
    return out;
  }
  require_target(o, {"chh", "mchh", "n0"});
  if (o.target == "chh") {
    PDESystem res = catalog::chh_transform(o.n).apply(catalog::chh(o.n), apply_options(o));
    out.reports = {systems_equivalent(res, catalog::chh_three_variable(o.n)), catalog::verify_locality(res, o.n)};
    add_system(out, res);
  } else if (o.target == "mchh") {
    PDESystem res = catalog::mchh_transform(o.n).apply(catalog::mchh(o.n), apply_options(o)).without_fields(catalog::mchh_auxiliary_fields(o.n));
    out.reports = {systems_equivalent(res, catalog::mchh_three_variable(o.n)), catalog::verify_locality(res, o.n)};
    add_system(out, res);
  } else {
    Rational k = *k_value(o, false);
    catalog::N0Pipeline p = catalog::n0_pipeline(k);
    out.reports = {systems_equivalent(p.transformed, catalog::n0_transf_golden(k)),
                   systems_equivalent(p.transformed, catalog::n0_final_in_alpha(k))};
    out.reports[0].notes = p.notes;
    add_system(out, p.transformed);
  }
  return out;
}

Outcome round_trip_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  std::optional<ReciprocalTransform> t;
  PDESystem src;
  if (doc) {
    t = doc->transform(o.target);
    src = doc->transform_source(o.target);
  } else {
    require_target(o, {"chh", "mchh"});
    t = o.target == "chh" ? catalog::chh_transform(o.n) : catalog::mchh_transform(o.n);
    src = o.target == "chh" ? catalog::chh(o.n) : catalog::mchh(o.n);
  }
  ApplyOptions a = apply_options(o);
  PDESystem back = t->inverse().apply(t->apply(src, a), a);
  Outcome out;
  out.reports.push_back(titled(systems_equivalent(back, src), "round trip " + o.target));
  add_system(out, back);
  return out;
}

Outcome potentialize_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  Outcome out;
  if (doc) {
    PDESystem sys = doc->system(o.target);
    std::vector<ConservedPair> laws;
    for (const auto& c : doc->conserved)
      if (c.system == o.target) laws.push_back(doc->conserved_pair(c.name));
    if (laws.empty()) throw InputError("potentialize: no conserved block refers to system '" + o.target + "'");
    std::string field = "M";
    while (sys.space().has_field(field) || sys.space().has_independent(field) || sys.space().has_parameter(field)) field += "p";
    Report closure;
    closure.name = "potentialize " + o.target;
    PDESystem pot = potentialize(sys, laws, field, &closure);
    out.reports.push_back(closure);
    add_system(out, pot);
    return out;
  }
  require_target(o, {"chh", "mchh"});
  if (o.target == "chh") {
    catalog::CbsResult r = catalog::cbs_check(o.n);
    out.reports.push_back(r.report);
    add_system(out, r.potential);
  } else {
    out.reports.push_back(catalog::verify_mcbs_potential(o.n));
  }
  return out;
}

Outcome lax_check_cmd(const Options& o, const dsl::Document* doc) {
  Outcome out;
  if (doc) {
    no_break(o);
    LaxPair lp = doc->lax(o.target);
    out.reports.push_back(verify_yields(lp, doc->lax_system(o.target), CompatibilityRoute::CrossDerivative, o.budget));
    out.text = lax_text(lp);
    out.latex = lax_latex(lp);
    return out;
  }
  require_target(o, {"chh", "mchh", "n0", "dp", "vakhnenko"});
  if (o.broken && o.target != "chh" && o.target != "mchh") no_break(o);
  LaxPair lp;
  PDESystem sys;
  CompatibilityRoute route = CompatibilityRoute::CrossDerivative;
  if (o.target == "chh") {
    lp = catalog::chh_lax(o.n, o.broken);
    sys = catalog::chh(o.n);
  } else if (o.target == "mchh") {
    lp = catalog::mchh_lax(o.n, o.broken);
    sys = catalog::mchh(o.n);
    route = CompatibilityRoute::ZeroCurvature;
  } else if (o.target == "n0") {
    Rational k = *k_value(o, false);
    lp = catalog::n0_lax(k);
    sys = catalog::n0_system(k);
  } else if (o.target == "dp") {
    lp = catalog::dp_lax();
    sys = catalog::dp_golden();
  } else {
    lp = catalog::vakhnenko_lax();
    sys = catalog::vakhnenko_golden();
  }
  out.reports.push_back(verify_yields(lp, sys, route, o.budget));
  out.text = lax_text(lp);
  out.latex = lax_latex(lp);
  return out;
}

Outcome miura_cmd(const Options& o, const dsl::Document* doc) {
  if (doc) throw InputError("miura runs on the catalog only");
  if (!o.target.empty() && o.target != "mchh") throw InputError("miura: unknown target '" + o.target + "' (catalog targets: mchh)");
  Outcome out;
  out.reports.push_back(catalog::verify_miura(o.n, o.broken ? 1 : -1));
  return out;
}

Outcome latex_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  Outcome out;
  auto show_system = [&](const PDESystem& s) {
    out.latex += system_latex(s);
    out.extra["system"] = to_json(s);
  };
  auto show_lax = [&](const LaxPair& lp) {
    out.latex += lax_latex(lp);
    out.extra["lax"] = to_json(lp);
  };
  if (doc) {
    if (std::any_of(doc->laxes.begin(), doc->laxes.end(), [&](const auto& b) { return b.name == o.target; }))
      show_lax(doc->lax(o.target));
    else
      show_system(doc->system(o.target));
  } else {
    require_target(o, {"chh", "mchh", "chh-three-variable", "mchh-three-variable", "cbs", "mcbs", "n0", "n0-final", "n0-transf",
                       "reduced", "dp", "vakhnenko", "chh-lax", "mchh-lax", "n0-lax", "n0-psi", "dp-lax", "vakhnenko-lax"});
    const std::string& t = o.target;
    if (t == "chh") show_system(catalog::chh(o.n));
    else if (t == "mchh") show_system(catalog::mchh(o.n));
    else if (t == "chh-three-variable") show_system(catalog::chh_three_variable(o.n));
    else if (t == "mchh-three-variable") show_system(catalog::mchh_three_variable(o.n));
    else if (t == "cbs") show_system(catalog::cbs(o.n, o.n));
    else if (t == "mcbs") show_system(catalog::mcbs_all(o.n));
    else if (t == "n0") show_system(catalog::n0_system(k_value(o, true)));
    else if (t == "n0-final") show_system(catalog::n0_final(*k_value(o, false)));
    else if (t == "n0-transf") show_system(catalog::n0_transf_golden(k_value(o, true)));
    else if (t == "reduced") {
      Rational k = *k_value(o, false);
      show_system(catalog::n0_reduced_golden(Rational(k + 1) / 3, Rational(2 - k) / 3));
    } else if (t == "dp") show_system(catalog::dp_golden());
    else if (t == "vakhnenko") show_system(catalog::vakhnenko_golden());
    else if (t == "chh-lax") show_lax(catalog::chh_lax(o.n));
    else if (t == "mchh-lax") show_lax(catalog::mchh_lax(o.n));
    else if (t == "n0-lax") show_lax(catalog::n0_lax(k_value(o, true)));
    else if (t == "n0-psi") show_lax(catalog::n0_psi_golden(*k_value(o, false)));
    else if (t == "dp-lax") show_lax(catalog::dp_lax());
    else show_lax(catalog::vakhnenko_lax());
  }
  out.text = out.latex;
  return out;
}

Outcome dispatch(const Options& o, const dsl::Document* doc);

// ---- scenarios ----

struct ScenarioJob {
  std::string name;
  std::string expected;
  std::function<Outcome()> run;
};

struct ScenarioResult {
  Report report;
  std::string expected;
  bool verdict = false;
  bool budget = false;
  std::string error;
};

ScenarioResult run_job(const ScenarioJob& job) {
  ScenarioResult r;
  r.expected = job.expected;
  try {
    Outcome oc = job.run();
    Report merged;
    for (const auto& p : oc.reports) merged.merge(p);
    merged.holds = oc.ok.value_or(std::all_of(oc.reports.begin(), oc.reports.end(), [](const Report& x) { return x.holds; }));
    r.report = merged;
  } catch (const NonTermination& e) {
    r.report.holds = false;
    r.budget = true;
    r.error = std::string(e.kind()) + ": " + e.what();
  } catch (const Error& e) {
    r.report.holds = false;
    r.error = std::string(e.kind()) + ": " + e.what();
  } catch (const std::exception& e) {
    r.report.holds = false;
    r.error = std::string("InternalError: ") + e.what();
  }
  if (!r.error.empty()) r.report.notes.push_back("error: " + r.error);
  r.report.name = job.name;
  r.verdict = (r.report.holds ? "holds" : "fails") == r.expected;
  return r;
}

Outcome scenario_cmd(const Options& o, const dsl::Document* doc) {
  no_break(o);
  std::vector<ScenarioJob> jobs;
  if (doc) {
    for (const auto& b : doc->scenarios) {
      if (!o.target.empty() && o.target != "all" && o.target != b.name) continue;
      Options so;
      so.command = b.get("command");
      so.target = b.get("target");
      so.n = std::stoi(b.get("n", std::to_string(o.n)));
      so.k = b.get("k", o.k);
      so.broken = b.get("break-constraint", "false") == "true";
      so.budget = o.budget;
      so.tol = o.tol;
      std::string expect = b.get("expect", "holds");
      if (expect != "holds" && expect != "fails") throw InputError("scenario " + b.name + ": expect must be holds or fails");
      if (so.command == "scenario" || std::find(kCommands.begin(), kCommands.end(), so.command) == kCommands.end())
        throw InputError("scenario " + b.name + ": unknown command '" + so.command + "'");
      jobs.push_back({b.name, expect, [so, doc] { return dispatch(so, doc); }});
    }
    if (jobs.empty()) throw InputError(o.target.empty() ? "document has no scenario blocks" : "unknown scenario '" + o.target + "'");
  } else {
    for (const auto& s : catalog::scenarios()) {
      if (!o.target.empty() && o.target != "all" && o.target != s.name) continue;
      const catalog::Scenario* sp = &s;
      int n = o.n;
      std::size_t budget = o.budget;
      jobs.push_back({s.name, s.expected, [sp, n, budget] {
                        Outcome oc;
                        oc.reports.push_back(sp->run(n, budget));
                        return oc;
                      }});
    }
    if (jobs.empty()) throw InputError("unknown scenario '" + o.target + "'");
  }
  std::vector<ScenarioResult> results(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) results[i] = run_job(jobs[i]);
  };
  std::size_t threads = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(1, o.jobs)), 1, jobs.size());
  std::vector<std::thread> pool;
  for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) { return a.report.name < b.report.name; });

  Outcome out;
  json verdicts = json::array();
  bool ok = true;
  std::ostringstream os;
  for (const auto& r : results) {
    out.reports.push_back(r.report);
    verdicts.push_back({{"name", r.report.name}, {"expected", r.expected}, {"holds", r.report.holds}, {"as_expected", r.verdict}});
    ok = ok && r.verdict;
    out.budget_exceeded = out.budget_exceeded || r.budget;
    os << (r.verdict ? "ok   " : "FAIL ") << r.report.name << " (expected " << r.expected << ", " << (r.report.holds ? "holds" : "fails")
       << ")\n";
  }
  out.extra["scenarios"] = verdicts;
  out.text = os.str();
  out.ok = ok;
  return out;
}

Outcome dispatch(const Options& o, const dsl::Document* doc) {
  if (o.command == "verify-conserved") return verify_conserved_cmd(o, doc);
  if (o.command == "verify-closed") return verify_closed_cmd(o, doc);
  if (o.command == "build-transform") return build_transform_cmd(o, doc);
  if (o.command == "apply") return apply_cmd(o, doc);
  if (o.command == "round-trip") return round_trip_cmd(o, doc);
  if (o.command == "potentialize") return potentialize_cmd(o, doc);
  if (o.command == "lax-check") return lax_check_cmd(o, doc);
  if (o.command == "miura") return miura_cmd(o, doc);
  if (o.command == "scenario") return scenario_cmd(o, doc);
  if (o.command == "latex") return latex_cmd(o, doc);
  throw InputError("unknown command '" + o.command + "'");
}

json diagnostic(int code, const std::string& kind, const std::string& message) {
  return {{"schema", kReportSchema}, {"status", "error"}, {"exit", code}, {"kind", kind}, {"message", message}};
}

int fail(std::ostream& err, int code, json d) {
  err << d.dump() << "\n";
  return code;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Reciprocal transformation engine and verifier", "recipro"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--json", o.json, "JSON report on stdout");
  app.add_option("--tex", o.tex, "write LaTeX to PATH");
  app.add_option("--budget", o.budget, "rewrite budget per reduction")->check(CLI::PositiveNumber);
  app.add_option("--tol", o.tol, "tolerance of numeric cross-checks")->check(CLI::PositiveNumber);
  app.add_option("--jobs", o.jobs, "concurrent scenarios")->check(CLI::PositiveNumber);
  app.add_option("--n", o.n, "hierarchy level");
  app.add_option("--k", o.k, "n0 parameter k (rational; 'k' for symbolic where allowed)");
  app.add_flag("--break-constraint", o.broken, "negative control: break the spectral constraint (miura: flip the sign)");
  app.add_option("--file", o.file, ".rcp document; the target names a block in it");
  for (const auto& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c, kSummaries.at(c));
    sub->add_option("target", o.target, "catalog name or block name");
    sub->callback([&o, c] { o.command = c; });
  }

  std::vector<std::string> argv_store{"recipro"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    return fail(err, kInputError, diagnostic(kInputError, "UsageError", e.what()));
  }

  try {
    std::optional<dsl::Document> doc;
    if (!o.file.empty()) {
      auto [d, diags] = dsl::parse_with_diagnostics(read_file(o.file));
      if (!diags.empty()) {
        json d0 = diagnostic(kInputError, diags.front().kind, diags.front().message);
        d0["file"] = o.file;
        d0["line"] = diags.front().line;
        d0["col"] = diags.front().col;
        json all = json::array();
        for (const auto& x : diags) all.push_back({{"line", x.line}, {"col", x.col}, {"kind", x.kind}, {"message", x.message}});
        d0["diagnostics"] = all;
        return fail(err, kInputError, d0);
      }
      doc = std::move(d);
      if (o.target.empty() && o.command != "scenario") throw InputError(o.command + ": a block name is required with --file");
    } else if (o.target.empty()) {
      if (o.command == "verify-conserved" || o.command == "verify-closed" || o.command == "build-transform" || o.command == "apply" ||
          o.command == "round-trip" || o.command == "potentialize" || o.command == "lax-check" || o.command == "latex")
        throw InputError(o.command + ": a target is required");
    }
    if (!doc && o.command != "scenario" && (o.n < 1 || o.n > catalog::kMaxLevel))
      throw InputError("--n must lie in 1.." + std::to_string(catalog::kMaxLevel));

    Outcome oc = dispatch(o, doc ? &*doc : nullptr);
    bool ok = oc.ok.value_or(std::all_of(oc.reports.begin(), oc.reports.end(), [](const Report& r) { return r.holds; }));
    int code = oc.budget_exceeded ? kBudgetExceeded : ok ? kOk : kCheckFailed;

    if (!o.tex.empty()) {
      std::ofstream f(o.tex);
      if (!f) throw InputError("cannot write '" + o.tex + "'");
      for (const auto& r : oc.reports) f << report_latex(r) << "\n";
      f << oc.latex;
    }
    if (o.json) {
      json j = to_json(oc.reports);
      j["command"] = o.command;
      j["target"] = o.target;
      j["holds"] = ok;
      j["exit"] = code;
      for (const auto& [key, v] : oc.extra.items()) j[key] = v;
      out << j.dump(2) << "\n";
    } else if (o.command == "scenario") {
      out << oc.text;
      if (code != kOk)
        for (const auto& r : oc.reports) out << r.text();
    } else {
      for (const auto& r : oc.reports) out << r.text();
      out << oc.text;
    }
    if (code == kCheckFailed) err << diagnostic(code, "CheckFailed", o.command + " " + o.target + ": check failed").dump() << "\n";
    if (code == kBudgetExceeded) err << diagnostic(code, "NonTermination", "rewrite budget exceeded").dump() << "\n";
    return code;
  } catch (const NonTermination& e) {
    return fail(err, kBudgetExceeded, diagnostic(kBudgetExceeded, e.kind(), e.what()));
  } catch (const SyntaxError& e) {
    json d = diagnostic(kInputError, e.kind(), e.message());
    d["line"] = e.line();
    d["col"] = e.column();
    return fail(err, kInputError, d);
  } catch (const InputError& e) {
    return fail(err, kInputError, diagnostic(kInputError, e.kind(), e.what()));
  } catch (const UnknownName& e) {
    return fail(err, kInputError, diagnostic(kInputError, e.kind(), e.what()));
  } catch (const DuplicateName& e) {
    return fail(err, kInputError, diagnostic(kInputError, e.kind(), e.what()));
  } catch (const InvalidArgument& e) {
    return fail(err, kInputError, diagnostic(kInputError, e.kind(), e.what()));
  } catch (const Error& e) {
    // the check could not be carried out (not solvable, uneliminable field, ...)
    return fail(err, kCheckFailed, diagnostic(kCheckFailed, e.kind(), e.what()));
  } catch (const std::exception& e) {
    return fail(err, kCheckFailed, diagnostic(kCheckFailed, "InternalError", e.what()));
  }
}

}  // namespace recipro::cli
