#include "typecause/diagnosis.hpp"

#include <map>
#include <sstream>

namespace typecause {

nlohmann::json span_json(const Span& span) {
  return {{"module", span.module},
          {"start_line", span.start_line},
          {"start_col", span.start_col},
          {"end_line", span.end_line},
          {"end_col", span.end_col}};
}

nlohmann::json diagnostics_json(const std::string& kind, const std::vector<Diagnostic>& diagnostics) {
  auto list = nlohmann::json::array();
  for (const auto& d : diagnostics) list.push_back({{"span", span_json(d.span)}, {"message", d.message}});
  return {{"error", kind}, {"diagnostics", list}};
}

namespace {

std::size_t shown(const ErrorReport& report, const CheckOptions& options) {
  auto n = report.causes.size();
  return options.top_k ? std::min(n, options.top_k) : n;
}

nlohmann::json cause_json(const Cause& cause) {
  auto spans = nlohmann::json::array();
  // Spans grouped by owning module and declaration, in first-seen order.
  std::vector<std::pair<DeclKey, std::vector<std::size_t>>> groups;
  for (std::size_t i = 0; i < cause.spans.size(); ++i) {
    const auto& s = cause.spans[i];
    spans.push_back({{"span", span_json(s.span)}, {"expected_type", s.expected_type}});
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == s.owner; });
    if (it == groups.end()) {
      groups.push_back({s.owner, {}});
      it = std::prev(groups.end());
    }
    it->second.push_back(i);
  }
  auto decl_groups = nlohmann::json::array();
  for (const auto& [key, indices] : groups)
    decl_groups.push_back({{"module", key.module}, {"decl", key.name}, {"span_indices", indices}});
  const auto& b = cause.breakdown;
  return {{"cause_id", cause.id},
          {"stars", cause.stars},
          {"score", cause.score},
          {"score_breakdown",
           {{"location_count", b.locations},
            {"span_decl_count", b.decls},
            {"free_var_count", b.free_vars},
            {"mus_membership", b.mus_membership}}},
          {"spans", spans},
          {"module_decl_groups", decl_groups}};
}

nlohmann::json hint_json(const TypeHint& h) {
  return {{"span", span_json(h.span)},
          {"kind", h.kind == HintKind::Expected ? "expected" : "inferred"},
          {"label", h.label},
          {"type", h.type}};
}

}  // namespace

nlohmann::json diagnosis_json(const CheckResult& result, const CheckOptions& options) {
  auto modules = nlohmann::json::array();
  for (const auto& m : result.sources) modules.push_back({{"id", m.id}, {"path", m.path}});

  auto errors = nlohmann::json::array();
  std::size_t before = 0, after = 0;
  for (std::size_t e = 0; e < result.errors.size(); ++e) {
    const auto& report = result.errors[e];
    before += report.causes_before_reduction;
    after += report.causes.size();
    auto spans = nlohmann::json::array();
    for (const auto& s : report.group.spans) spans.push_back(span_json(s));
    auto causes = nlohmann::json::array();
    auto hints = nlohmann::json::object();
    for (std::size_t c = 0; c < shown(report, options); ++c) {
      causes.push_back(cause_json(report.causes[c]));
      auto list = nlohmann::json::array();
      for (const auto& h : report.hints[c]) list.push_back(hint_json(h));
      hints[std::to_string(report.causes[c].id)] = list;
    }
    errors.push_back({{"error_id", e},
                      {"spans", spans},
                      {"cause_count", report.causes.size()},
                      {"causes", causes},
                      {"hints_by_cause", hints}});
  }

  const auto& t = result.timing;
  return {{"version", kDiagnosisVersion},
          {"partial", result.family.partial},
          {"well_typed", result.well_typed},
          {"modules", modules},
          {"errors", errors},
          {"timing",
           {{"resolve_ms", t.resolve_ms},
            {"constraints_ms", t.constraints_ms},
            {"enumeration_ms", t.enumeration_ms},
            {"analysis_ms", t.analysis_ms},
            {"total_ms", t.total_ms}}},
          {"stats",
           {{"query_count", result.query_count},
            {"soft_constraints", result.system.soft.size()},
            {"hard_constraints", result.system.hard.size()},
            {"mus_count", result.family.muses.size()},
            {"mcs_count", result.family.mcses.size()},
            {"mss_count", result.family.msses.size()},
            {"causes_before_reduction", before},
            {"causes_after_reduction", after},
            {"structural_fallback", result.structural_fallback}}}};
}

namespace {

// Source text under a single-line span, or empty when it spans lines.
std::string excerpt(const CheckResult& result, const Span& span) {
  if (span.start_line != span.end_line) return "";
  for (const auto& m : result.sources) {
    if (m.id != span.module) continue;
    if (span.end > m.source.size() || span.begin >= span.end) return "";
    auto text = m.source.substr(span.begin, span.end - span.begin);
    return text.size() > 40 ? text.substr(0, 37) + "..." : text;
  }
  return "";
}

std::string stars(int n) {
  std::string out;
  for (int i = 0; i < 3; ++i) out += i < n ? "★" : "☆";
  return out;
}

}  // namespace

std::string render_text(const CheckResult& result, const CheckOptions& options) {
  std::ostringstream os;
  if (result.well_typed) {
    os << "no type errors\n";
    return os.str();
  }
  if (result.family.partial) os << "note: enumeration budget exhausted; causes may be incomplete\n";
  for (std::size_t e = 0; e < result.errors.size(); ++e) {
    const auto& report = result.errors[e];
    os << "type error " << e + 1 << " of " << result.errors.size() << " (" << report.causes.size()
       << (report.causes.size() == 1 ? " possible cause" : " possible causes") << ")\n";
    for (std::size_t c = 0; c < shown(report, options); ++c) {
      const auto& cause = report.causes[c];
      os << "  " << stars(cause.stars) << " cause " << c + 1 << "  [score " << cause.score << "]\n";
      for (const auto& s : cause.spans) {
        os << "      " << s.span.to_string();
        auto text = excerpt(result, s.span);
        if (!text.empty()) os << "  `" << text << "`";
        os << "  expected " << s.expected_type << '\n';
      }
      bool header = false;
      for (const auto& h : report.hints[c]) {
        if (h.kind != HintKind::Inferred) continue;
        if (!header) os << "      then:";
        os << (header ? ", " : " ") << h.label << " :: " << h.type;
        header = true;
      }
      if (header) os << '\n';
    }
  }
  return os.str();
}

}  // namespace typecause
