#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>

#include "json.hpp"
#include "typecause/pipeline.hpp"

namespace httplib {
class Server;
}

namespace typecause {

/// JSON response of an API call.
struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

/// Local API over a directory of source files:
///   GET  /api/health
///   GET  /api/files             every file under the root, sorted
///   GET  /api/file?path=P       {"path", "content"}
///   PUT  /api/file              {"path", "content"} saves a file
///   POST /api/check             {"files": [...]} or {"manifest": path or object},
///                               optional "options"; answers a Diagnosis
/// Writes are exclusive; checks read a consistent snapshot of the files they
/// need and then run without holding the lock.
class Service {
 public:
  Service(std::filesystem::path root, CheckOptions defaults = {});

  ApiResponse health() const;
  ApiResponse list_files() const;
  ApiResponse get_file(const std::string& path) const;
  ApiResponse put_file(const std::string& body);
  ApiResponse check(const std::string& body) const;

  /// Installs the routes on an httplib server.
  void install(httplib::Server& server);

  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  /// Maps a client path to a file under the root; nothing if it escapes.
  std::optional<std::filesystem::path> locate(const std::string& path) const;
  std::string read_locked(const std::string& path) const;
  ApiResponse internal_error(const std::exception& e) const;

  std::filesystem::path root_;
  CheckOptions defaults_;
  mutable std::shared_mutex files_mutex_;
  mutable std::atomic<std::uint64_t> error_counter_{0};
};

/// Applies request or command-line style overrides to check options:
/// top_k, reduce, weights [w1, w2, w3(, w4)], max_solve_calls,
/// enum_timeout_ms, merge_signatures, structural_hard. Throws InputError.
void apply_options(const nlohmann::json& overrides, CheckOptions& options);

/// Runs the service until the process is stopped. Returns non-zero if the
/// port cannot be bound.
int serve(const std::filesystem::path& root, const std::string& host, int port, const CheckOptions& defaults = {});

}  // namespace typecause
