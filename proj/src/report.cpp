#include "recipro/report.hpp"

#include <algorithm>

namespace recipro {

namespace {

using nlohmann::json;

json equations_json(const std::vector<Equation>& eqs) {
  json a = json::array();
  for (const auto& eq : eqs) a.push_back({{"label", eq.label}, {"text", to_text(eq.expr)}, {"latex", to_latex(eq.expr)}, {"definition", eq.definition}});
  return a;
}

std::string rows(const std::vector<Equation>& eqs) {
  std::string s;
  for (std::size_t i = 0; i < eqs.size(); ++i) {
    s += "  " + to_latex(eqs[i].expr) + " &= 0";
    s += i + 1 < eqs.size() ? " \\\\\n" : "\n";
  }
  return s;
}

std::string escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '&' || c == '%' || c == '#' || c == '$') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

json to_json(const Report& r) {
  json res = json::array();
  std::string first;
  for (const auto& x : r.residuals) {
    std::string tex = x.value.is_zero() ? "0" : to_latex(x.value);
    if (first.empty() && !x.value.is_zero()) first = tex;
    res.push_back({{"label", x.label}, {"zero", x.value.is_zero()}, {"text", x.value.is_zero() ? "0" : to_text(x.value)}, {"latex", tex}});
  }
  return {{"schema", kReportSchema},
          {"name", r.name},
          {"holds", r.holds},
          {"residual_latex", first.empty() ? "0" : first},
          {"rewrite_count", r.rewrite_count},
          {"residuals", res},
          {"notes", r.notes}};
}

json to_json(const std::vector<Report>& reports) {
  std::vector<Report> sorted = reports;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Report& a, const Report& b) { return a.name < b.name; });
  json a = json::array();
  bool holds = true;
  for (const auto& r : sorted) {
    a.push_back(to_json(r));
    holds = holds && r.holds;
  }
  return {{"schema", kReportSchema}, {"holds", holds}, {"reports", a}};
}

json to_json(const PDESystem& sys) {
  const JetSpace& s = sys.space();
  json j = {{"schema", kReportSchema},
            {"name", sys.name()},
            {"independents", s.independents()},
            {"dependents", s.dependents()},
            {"parameters", s.parameters()},
            {"max_order", s.max_order()},
            {"equations", equations_json(sys.equations())},
            {"provenance", sys.provenance()}};
  return j;
}

json to_json(const ReciprocalTransform& t, int rule_order) {
  const TransformData& d = t.data();
  json form = json::object();
  for (const auto& [v, c] : d.one_form) form[v] = {{"text", to_text(c)}, {"latex", to_latex(c)}};
  json inv = json::object();
  for (const auto& [f, e] : d.relations) inv[f] = {{"text", to_text(e)}, {"latex", to_latex(e)}};
  json grad = json::object();
  for (const auto& [v, e] : d.gradient) grad[v] = {{"text", to_text(e)}, {"latex", to_latex(e)}};
  json renames = json::object();
  for (const auto& [a, b] : d.renames) renames[a] = b;
  json j = {{"schema", kReportSchema},
            {"source_pivot", d.source_pivot},
            {"target_pivot", d.target_pivot},
            {"new_field", d.new_field},
            {"renames", renames},
            {"one_form", form},
            {"inverse_relations", inv},
            {"gradient", grad},
            {"notes", d.notes}};
  if (rule_order > 0) {
    json rules = json::array();
    for (const auto& [jet, e] : t.derivative_rules(rule_order))
      rules.push_back({{"jet", atom_text(jet)}, {"text", to_text(e)}, {"latex", to_latex(e)}});
    j["rules"] = rules;
  }
  return j;
}

json to_json(const LaxPair& lp) {
  return {{"schema", kReportSchema},
          {"name", lp.name},
          {"kind", lp.kind == LaxKind::Matrix2 ? "matrix" : "scalar"},
          {"eigen", lp.eigen},
          {"spectral", lp.spectral},
          {"spatial", equations_json(lp.spatial)},
          {"temporal", equations_json(lp.temporal)},
          {"constraints", equations_json(lp.constraints)},
          {"notes", lp.notes}};
}

std::string system_latex(const PDESystem& sys) {
  return "% " + sys.name() + "\n\\begin{aligned}\n" + rows(sys.equations()) + "\\end{aligned}\n";
}

std::string lax_latex(const LaxPair& lp) {
  std::vector<Equation> all = lp.spatial;
  all.insert(all.end(), lp.temporal.begin(), lp.temporal.end());
  all.insert(all.end(), lp.constraints.begin(), lp.constraints.end());
  return "% " + lp.name + "\n\\begin{aligned}\n" + rows(all) + "\\end{aligned}\n";
}

std::string report_latex(const Report& r) {
  std::string s = "% " + r.name + (r.holds ? " holds" : " fails") + "\n\\begin{aligned}\n";
  for (std::size_t i = 0; i < r.residuals.size(); ++i) {
    const auto& x = r.residuals[i];
    s += "  \\text{" + escape_text(x.label) + "} &: " + (x.value.is_zero() ? std::string("0") : to_latex(x.value));
    s += i + 1 < r.residuals.size() ? " \\\\\n" : "\n";
  }
  return s + "\\end{aligned}\n";
}

}  // namespace recipro
