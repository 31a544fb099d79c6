#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "typecause/pipeline.hpp"

namespace typecause {

inline constexpr const char* kDiagnosisVersion = "1.0";

nlohmann::json span_json(const Span& span);

/// The Diagnosis document consumed by the CLI's --json mode and the UI.
nlohmann::json diagnosis_json(const CheckResult& result, const CheckOptions& options = {});

/// Body of a syntax or resolution failure: {"error": kind, "diagnostics": [...]}.
nlohmann::json diagnostics_json(const std::string& kind, const std::vector<Diagnostic>& diagnostics);

/// Terminal rendering: errors in order, causes with star glyphs, then hints.
std::string render_text(const CheckResult& result, const CheckOptions& options = {});

}  // namespace typecause
