#include "typecause/service.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>

#include "httplib.h"
#include "typecause/diagnosis.hpp"

namespace typecause {

namespace fs = std::filesystem;

namespace {

struct NotFound : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BadRequest : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ApiResponse error_response(int status, const std::string& message) {
  return {status, {{"error", message}}};
}

nlohmann::json parse_body(const std::string& body) {
  try {
    auto doc = nlohmann::json::parse(body);
    if (!doc.is_object()) throw BadRequest("request body must be a JSON object");
    return doc;
  } catch (const nlohmann::json::parse_error&) {
    throw BadRequest("request body is not valid JSON");
  }
}

}  // namespace

void apply_options(const nlohmann::json& o, CheckOptions& options) {
  if (!o.is_object()) throw InputError("options must be an object");
  try {
    if (o.contains("top_k")) options.top_k = o["top_k"].get<std::size_t>();
    if (o.contains("reduce")) options.analysis.reduce = o["reduce"].get<bool>();
    if (o.contains("merge_signatures")) options.generation.merge_signatures = o["merge_signatures"].get<bool>();
    if (o.contains("structural_hard")) options.generation.structural_hard = o["structural_hard"].get<bool>();
    if (o.contains("max_solve_calls")) options.budget.max_solve_calls = o["max_solve_calls"].get<std::size_t>();
    if (o.contains("enum_timeout_ms"))
      options.budget.timeout = std::chrono::milliseconds(o["enum_timeout_ms"].get<std::int64_t>());
    if (o.contains("weights")) {
      auto w = o["weights"].get<std::vector<double>>();
      if (w.size() < 3 || w.size() > 4) throw InputError("weights takes three or four numbers");
      options.analysis.weights = {w[0], w[1], w[2], w.size() == 4 ? w[3] : 0.0};
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("bad option: ") + e.what());
  }
}

Service::Service(fs::path root, CheckOptions defaults)
    : root_(fs::weakly_canonical(std::move(root))), defaults_(std::move(defaults)) {}

std::optional<fs::path> Service::locate(const std::string& path) const {
  if (path.empty()) return std::nullopt;
  fs::path p(path);
  if (p.is_absolute() || p.has_root_name()) return std::nullopt;
  for (const auto& part : p)
    if (part == "..") return std::nullopt;
  return root_ / p.lexically_normal();
}

std::string Service::read_locked(const std::string& path) const {
  auto file = locate(path);
  if (!file) throw BadRequest("path must stay inside the project root: " + path);
  std::ifstream in(*file, std::ios::binary);
  if (!in || fs::is_directory(*file)) throw NotFound("no such file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ApiResponse Service::internal_error(const std::exception& e) const {
  char id[32];
  auto now = std::chrono::duration_cast<std::chrono::microseconds>(
                 std::chrono::system_clock::now().time_since_epoch())
                 .count();
  std::snprintf(id, sizeof id, "%llx-%llx", static_cast<unsigned long long>(now),
                static_cast<unsigned long long>(++error_counter_));
  std::cerr << "internal error " << id << ": " << e.what() << '\n';
  return {500, {{"error", "internal error"}, {"id", id}}};
}

ApiResponse Service::health() const { return {200, {{"status", "ok"}, {"version", kDiagnosisVersion}}}; }

ApiResponse Service::list_files() const {
  std::shared_lock lock(files_mutex_);
  std::vector<std::string> files;
  std::error_code ec;
  for (auto it = fs::recursive_directory_iterator(root_, ec); !ec && it != fs::recursive_directory_iterator();
       it.increment(ec)) {
    if (it->is_regular_file()) files.push_back(fs::relative(it->path(), root_).generic_string());
  }
  std::sort(files.begin(), files.end());
  auto list = nlohmann::json::array();
  for (const auto& f : files) list.push_back({{"path", f}, {"kind", fs::path(f).extension() == ".mml" ? "module" : "other"}});
  return {200, {{"files", list}}};
}

ApiResponse Service::get_file(const std::string& path) const {
  try {
    std::shared_lock lock(files_mutex_);
    return {200, {{"path", path}, {"content", read_locked(path)}}};
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const NotFound& e) {
    return error_response(404, e.what());
  }
}

ApiResponse Service::put_file(const std::string& body) {
  try {
    auto doc = parse_body(body);
    if (!doc.contains("path") || !doc["path"].is_string() || !doc.contains("content") || !doc["content"].is_string())
      throw BadRequest("expected {\"path\": string, \"content\": string}");
    auto path = doc["path"].get<std::string>();
    auto file = locate(path);
    if (!file) throw BadRequest("path must stay inside the project root: " + path);
    std::unique_lock lock(files_mutex_);
    if (!fs::is_directory(file->parent_path())) throw NotFound("no such directory for " + path);
    auto temp = *file;
    temp += ".tmp-save";
    {
      std::ofstream out(temp, std::ios::binary | std::ios::trunc);
      out << doc["content"].get<std::string>();
      if (!out) throw std::runtime_error("cannot write " + temp.string());
    }
    fs::rename(temp, *file);
    return {200, {{"path", path}, {"saved", true}}};
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const NotFound& e) {
    return error_response(404, e.what());
  } catch (const std::exception& e) {
    return internal_error(e);
  }
}

ApiResponse Service::check(const std::string& body) const {
  try {
    auto doc = parse_body(body);
    CheckOptions options = defaults_;
    if (doc.contains("options")) apply_options(doc["options"], options);

    CheckInput input;
    {
      // Snapshot every file the check needs under one read lock.
      std::shared_lock lock(files_mutex_);
      auto reader = [&](const std::string& p) { return read_locked(p); };
      if (doc.contains("manifest")) {
        const auto& m = doc["manifest"];
        if (m.is_string()) {
          auto manifest_path = m.get<std::string>();
          nlohmann::json manifest;
          try {
            manifest = nlohmann::json::parse(read_locked(manifest_path));
          } catch (const nlohmann::json::parse_error&) {
            throw BadRequest("malformed manifest " + manifest_path);
          }
          auto base = fs::path(manifest_path).parent_path();
          input = input_from_manifest(manifest, [&](const std::string& p) {
            return read_locked((base / p).lexically_normal().generic_string());
          });
        } else {
          input = input_from_manifest(m, reader);
        }
      } else if (doc.contains("files") && doc["files"].is_array() && !doc["files"].empty()) {
        for (const auto& f : doc["files"]) {
          if (!f.is_string()) throw BadRequest("files must be strings");
          auto p = f.get<std::string>();
          input.modules.push_back({module_id_for(p), p, read_locked(p)});
        }
      } else {
        throw BadRequest("expected \"files\" (non-empty array) or \"manifest\"");
      }
    }
    auto result = typecause::check(input, options);
    return {200, diagnosis_json(result, options)};
  } catch (const BadRequest& e) {
    return error_response(400, e.what());
  } catch (const InputError& e) {
    return error_response(400, e.what());
  } catch (const NotFound& e) {
    return error_response(404, e.what());
  } catch (const SyntaxError& e) {
    return {422, diagnostics_json("syntax", {{e.span(), e.message()}})};
  } catch (const ResolveError& e) {
    return {422, diagnostics_json("resolve", e.diagnostics())};
  } catch (const std::exception& e) {
    return internal_error(e);
  }
}

void Service::install(httplib::Server& server) {
  auto send = [](httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json; charset=utf-8");
  };
  server.Get("/api/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Get("/api/files", [this, send](const httplib::Request&, httplib::Response& res) { send(res, list_files()); });
  server.Get("/api/file", [this, send](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("path")) return send(res, error_response(400, "missing path parameter"));
    send(res, get_file(req.get_param_value("path")));
  });
  server.Put("/api/file", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, put_file(req.body));
  });
  server.Post("/api/check", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, check(req.body));
  });
  server.set_exception_handler([this, send](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      send(res, internal_error(e));
    } catch (...) {
      send(res, internal_error(std::runtime_error("unknown exception")));
    }
  });
  server.set_error_handler([send](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) send(res, error_response(res.status, "not found"));
  });
}

int serve(const fs::path& root, const std::string& host, int port, const CheckOptions& defaults) {
  if (!fs::is_directory(root)) {
    std::cerr << "not a directory: " << root << '\n';
    return 2;
  }
  Service service(root, defaults);
  httplib::Server server;
  service.install(server);
  std::cerr << "serving " << service.root().string() << " on http://" << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ':' << port << '\n';
    return 1;
  }
  return 0;
}

}  // namespace typecause
