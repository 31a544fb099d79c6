#include "typecause/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "typecause/solver.hpp"

namespace typecause {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace

std::string module_id_for(const std::string& path) {
  auto stem = std::filesystem::path(path).stem().string();
  return stem.empty() ? path : stem;
}

CheckInput input_from_manifest(const nlohmann::json& manifest, const FileReader& read) {
  if (!manifest.is_object() || !manifest.contains("modules") || !manifest["modules"].is_array())
    throw InputError("manifest needs a \"modules\" array");
  CheckInput input;
  for (const auto& m : manifest["modules"]) {
    if (!m.is_object() || !m.contains("path") || !m["path"].is_string())
      throw InputError("every manifest module needs a string \"path\"");
    std::string path = m["path"].get<std::string>();
    std::string id = module_id_for(path);
    if (m.contains("id")) {
      if (!m["id"].is_string() || m["id"].get<std::string>().empty())
        throw InputError("manifest module ids must be non-empty strings");
      id = m["id"].get<std::string>();
    }
    input.modules.push_back({id, path, read(path)});
  }
  if (manifest.contains("imports")) {
    const auto& imports = manifest["imports"];
    if (!imports.is_array()) throw InputError("manifest \"imports\" must be an array");
    for (const auto& e : imports) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string())
        throw InputError("each import edge must be [importer, imported]");
      input.imports.push_back({e[0].get<std::string>(), e[1].get<std::string>()});
    }
  }
  return input;
}

CheckInput load_manifest(const std::filesystem::path& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError("malformed manifest " + path.string() + ": " + e.what());
  }
  auto base = path.parent_path();
  return input_from_manifest(doc, [&](const std::string& p) { return read_file(base / p); });
}

CheckInput load_files(const std::vector<std::filesystem::path>& paths) {
  CheckInput input;
  for (const auto& p : paths) input.modules.push_back({module_id_for(p.string()), p.string(), read_file(p)});
  return input;
}

CheckResult check(const CheckInput& input, const CheckOptions& options) {
  auto start = std::chrono::steady_clock::now();
  CheckResult result;
  result.sources = input.modules;

  auto phase = std::chrono::steady_clock::now();
  Program program = resolve_program(input.modules, input.imports);
  result.timing.resolve_ms = elapsed_ms(phase);

  phase = std::chrono::steady_clock::now();
  result.system = build_constraints(program, options.generation);
  auto solver = std::make_unique<Solver>(result.system);
  if (!solver->hard_satisfiable() && options.generation.structural_hard) {
    // Structural shapes clash among themselves; keep them blameable instead.
    GenerationOptions relaxed = options.generation;
    relaxed.structural_hard = false;
    result.system = build_constraints(program, relaxed);
    solver = std::make_unique<Solver>(result.system);
    result.structural_fallback = true;
  }
  result.timing.constraints_ms = elapsed_ms(phase);

  phase = std::chrono::steady_clock::now();
  SoftIds all(result.system.soft.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  result.well_typed = solver->satisfiable(all);
  if (!result.well_typed) result.family = enumerate(*solver, options.budget);
  result.timing.enumeration_ms = elapsed_ms(phase);

  phase = std::chrono::steady_clock::now();
  if (!result.well_typed) result.errors = analyze(result.system, *solver, result.family, options.analysis);
  result.timing.analysis_ms = elapsed_ms(phase);

  result.query_count = solver->query_count();
  result.timing.total_ms = elapsed_ms(start);
  return result;
}

}  // namespace typecause
