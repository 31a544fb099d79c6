// typecause: type checker that lists every complete fix for each type error.

#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "typecause/diagnosis.hpp"
#include "typecause/pipeline.hpp"
#include "typecause/service.hpp"

namespace {

using namespace typecause;

constexpr int kDefaultPort = 8765;

int default_port() {
  if (const char* env = std::getenv("TYPECAUSE_PORT")) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
      std::cerr << "ignoring malformed TYPECAUSE_PORT\n";
    }
  }
  return kDefaultPort;
}

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  if (out.size() < 3 || out.size() > 4) throw InputError("--weights takes three or four comma-separated numbers");
  return out;
}

void print_diagnostics(const std::vector<Diagnostic>& diagnostics, const char* kind) {
  for (const auto& d : diagnostics) std::cerr << d.span.to_string() << ": " << kind << " error: " << d.message << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type checker that reports complete, ranked causes for each type error"};
  app.require_subcommand(1);

  CheckOptions options;
  bool json = false, dump = false, no_merge = false, no_structural = false, no_reduce = false, stats = false;
  std::string weights, manifest;
  std::vector<std::string> paths;
  std::int64_t timeout_ms = 0;

  auto* check_cmd = app.add_subcommand("check", "Type check modules and report errors");
  check_cmd->add_flag("--json", json, "Print the Diagnosis document as JSON");
  check_cmd->add_flag("--dump-constraints", dump, "Print the generated constraints and stop");
  check_cmd->add_flag("--no-merge-signatures", no_merge, "Keep one constraint per signature node");
  check_cmd->add_flag("--no-structural-hard", no_structural, "Let structural constraints be blamed");
  check_cmd->add_flag("--no-reduce", no_reduce, "List every cause, without set-cover reduction");
  check_cmd->add_option("--top-k", options.top_k, "Show at most N causes per error (0 = all)");
  check_cmd->add_option("--weights", weights, "Ranking weights w1,w2,w3[,w4]");
  check_cmd->add_option("--max-solve-calls", options.budget.max_solve_calls, "Stop enumeration after N solver calls");
  check_cmd->add_option("--enum-timeout-ms", timeout_ms, "Stop enumeration after N milliseconds");
  check_cmd->add_flag("--stats", stats, "Print solver statistics to stderr");
  check_cmd->add_option("--manifest", manifest, "JSON manifest listing modules and imports");
  check_cmd->add_option("paths", paths, "Source files (.mml)");

  std::string root = ".";
  std::string host = "127.0.0.1";
  int port = default_port();
  auto* serve_cmd = app.add_subcommand("serve", "Serve the local HTTP API over a directory");
  serve_cmd->add_option("--root", root, "Project directory")->capture_default_str();
  serve_cmd->add_option("--host", host, "Address to bind")->capture_default_str();
  serve_cmd->add_option("--port", port, "Port (default from TYPECAUSE_PORT)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    options.generation.merge_signatures = !no_merge;
    options.generation.structural_hard = !no_structural;
    options.analysis.reduce = !no_reduce;
    options.budget.timeout = std::chrono::milliseconds(timeout_ms);
    if (!weights.empty()) {
      auto w = parse_weights(weights);
      options.analysis.weights = {w[0], w[1], w[2], w.size() == 4 ? w[3] : 0.0};
    }

    if (serve_cmd->parsed()) return serve(root, host, port, options);

    if (manifest.empty() && paths.empty()) {
      std::cerr << "check: give source files or --manifest\n";
      return 2;
    }
    CheckInput input;
    if (!manifest.empty()) input = load_manifest(manifest);
    if (!paths.empty()) {
      auto extra = load_files({paths.begin(), paths.end()});
      input.modules.insert(input.modules.end(), extra.modules.begin(), extra.modules.end());
    }

    if (dump) {
      auto program = resolve_program(input.modules, input.imports);
      std::cout << dump_clauses(build_constraints(program, options.generation));
      return 0;
    }

    auto result = check(input, options);
    if (json)
      std::cout << diagnosis_json(result, options).dump(2) << '\n';
    else
      std::cout << render_text(result, options);
    if (stats) {
      std::cerr << "soft constraints: " << result.system.soft.size() << '\n'
                << "hard constraints: " << result.system.hard.size() << '\n'
                << "query_count: " << result.query_count << '\n'
                << "muses: " << result.family.muses.size() << ", mcses: " << result.family.mcses.size()
                << ", msses: " << result.family.msses.size() << (result.family.partial ? " (partial)" : "") << '\n';
    }
    return result.well_typed ? 0 : 1;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
  } catch (const SyntaxError& e) {
    print_diagnostics({{e.span(), e.message()}}, "syntax");
  } catch (const ResolveError& e) {
    print_diagnostics(e.diagnostics(), "scope");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 2;
}
