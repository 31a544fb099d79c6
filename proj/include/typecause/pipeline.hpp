#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "typecause/analysis.hpp"
#include "typecause/constraints.hpp"
#include "typecause/enumeration.hpp"
#include "typecause/syntax.hpp"

namespace typecause {

/// Unreadable file or malformed manifest.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Modules and import edges to check together.
struct CheckInput {
  std::vector<SourceModule> modules;
  std::vector<ImportEdge> imports;
};

/// Reads a source file by manifest-relative path; throws InputError.
using FileReader = std::function<std::string(const std::string& path)>;

/// Builds input from a manifest document:
///   {"modules": [{"id": "A", "path": "a.mml"}, ...], "imports": [["B", "A"], ...]}
/// where ["B", "A"] means B imports A. A module without "id" is named after
/// its file stem.
CheckInput input_from_manifest(const nlohmann::json& manifest, const FileReader& read);

CheckInput load_manifest(const std::filesystem::path& path);

/// One module per file, named after the file stem; imports come from the
/// sources' import declarations.
CheckInput load_files(const std::vector<std::filesystem::path>& paths);

std::string module_id_for(const std::string& path);

struct CheckOptions {
  GenerationOptions generation;
  EnumerationBudget budget;
  AnalysisOptions analysis;
  std::size_t top_k = 0;  // 0 keeps every cause
};

struct Timing {
  double resolve_ms = 0;
  double constraints_ms = 0;
  double enumeration_ms = 0;
  double analysis_ms = 0;
  double total_ms = 0;
};

struct CheckResult {
  std::vector<SourceModule> sources;
  ConstraintSystem system;
  SubsetFamily family;
  std::vector<ErrorReport> errors;
  bool well_typed = true;
  bool structural_fallback = false;  // structural constraints had to stay soft
  std::size_t query_count = 0;
  Timing timing;
};

/// Resolves, generates constraints, enumerates and analyses. Throws
/// SyntaxError or ResolveError for programs that cannot be type checked.
CheckResult check(const CheckInput& input, const CheckOptions& options = {});

}  // namespace typecause
