#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "fixture_support.hpp"
#include "httplib.h"
#include "typecause/service.hpp"

#include <cstdio>
#include <sys/wait.h>
#include <thread>

using namespace typecause;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// A scratch project directory populated from the fixtures.
struct Project {
  fs::path root;

  Project() {
    root = fs::temp_directory_path() / ("typecause-test-" + std::to_string(::getpid()));
    fs::remove_all(root);
    fs::create_directories(root / "cross_module");
    for (const char* f : {"char_in_int_list.mml", "two_independent_errors.mml", "concrete_types.mml"})
      fs::copy_file(fixture::dir() / f, root / f);
    for (const char* f : {"a.mml", "b.mml", "manifest.json"})
      fs::copy_file(fixture::dir() / "cross_module" / f, root / "cross_module" / f);
    write("fine.mml", "x = 1\n");
    write("broken.mml", "x = (1,\n");
    write("unbound.mml", "x = nope\n");
  }
  ~Project() { fs::remove_all(root); }

  void write(const std::string& name, const std::string& text) const {
    std::ofstream(root / name) << text;
  }
};

/// Service on an ephemeral port, stopped on destruction.
struct Running {
  Service service;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  explicit Running(const fs::path& root) : service(root) {
    service.install(server);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

json without_timing(json doc) {
  doc.erase("timing");
  return doc;
}

struct Run {
  int status = -1;
  std::string out;
};

Run run_cli(const fs::path& cwd, const std::string& args) {
  std::string cmd = "cd '" + cwd.string() + "' && '" TYPECAUSE_CLI "' " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

}  // namespace

TEST_CASE("health and file listing") {
  Project p;
  Running s(p.root);
  auto c = s.client();
  auto health = c.Get("/api/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(json::parse(health->body)["status"] == "ok");

  auto files = c.Get("/api/files");
  REQUIRE(files);
  auto list = json::parse(files->body)["files"];
  std::vector<std::string> paths;
  for (const auto& f : list) paths.push_back(f["path"]);
  CHECK(std::is_sorted(paths.begin(), paths.end()));
  CHECK(std::find(paths.begin(), paths.end(), "cross_module/a.mml") != paths.end());
  for (const auto& f : list)
    if (f["path"] == "cross_module/manifest.json") CHECK(f["kind"] == "other");
}

TEST_CASE("reading files: found, missing, escaping the root") {
  Project p;
  Running s(p.root);
  auto c = s.client();
  auto ok = c.Get("/api/file?path=fine.mml");
  REQUIRE(ok);
  CHECK(ok->status == 200);
  CHECK(json::parse(ok->body)["content"] == "x = 1\n");
  CHECK(c.Get("/api/file?path=nothing.mml")->status == 404);
  CHECK(c.Get("/api/file?path=..%2Fetc%2Fpasswd")->status == 400);
  CHECK(c.Get("/api/file?path=%2Fetc%2Fpasswd")->status == 400);
  CHECK(c.Get("/api/file")->status == 400);
  CHECK(c.Get("/api/nope")->status == 404);
}

TEST_CASE("saving then checking sees the new content") {
  Project p;
  Running s(p.root);
  auto c = s.client();
  auto check = [&] {
    auto r = c.Post("/api/check", R"({"files": ["fine.mml"]})", "application/json");
    REQUIRE(r);
    REQUIRE(r->status == 200);
    return json::parse(r->body);
  };
  CHECK(check()["well_typed"] == true);
  CHECK(check()["errors"].empty());

  auto put = c.Put("/api/file", json{{"path", "fine.mml"}, {"content", "x = 1 + 'c'\n"}}.dump(), "application/json");
  REQUIRE(put);
  CHECK(put->status == 200);
  auto doc = check();
  CHECK(doc["well_typed"] == false);
  CHECK(doc["errors"].size() == 1);

  CHECK(c.Put("/api/file", json{{"path", "../x.mml"}, {"content", ""}}.dump(), "application/json")->status == 400);
  CHECK(c.Put("/api/file", "not json", "application/json")->status == 400);
  CHECK(c.Put("/api/file", json{{"path", "nodir/x.mml"}, {"content", ""}}.dump(), "application/json")->status == 404);
}

TEST_CASE("check: errors, options, manifests and bad requests") {
  Project p;
  Running s(p.root);
  auto c = s.client();
  auto post = [&](const json& body) { return c.Post("/api/check", body.dump(), "application/json"); };

  auto r = post({{"files", {"two_independent_errors.mml"}}});
  REQUIRE(r);
  CHECK(r->status == 200);
  auto doc = json::parse(r->body);
  CHECK(doc["version"] == "1.0");
  CHECK(doc["errors"].size() == 2);
  const auto& cause = doc["errors"][0]["causes"][0];
  for (const char* key : {"cause_id", "stars", "score", "score_breakdown", "spans", "module_decl_groups"})
    CHECK(cause.contains(key));
  CHECK(doc["errors"][0]["hints_by_cause"].contains("0"));

  auto limited = json::parse(post({{"files", {"char_in_int_list.mml"}}, {"options", {{"top_k", 1}}}})->body);
  CHECK(limited["errors"][0]["causes"].size() == 1);

  auto by_path = post({{"manifest", "cross_module/manifest.json"}});
  REQUIRE(by_path);
  CHECK(by_path->status == 200);
  CHECK(json::parse(by_path->body)["modules"].size() == 2);
  json inline_manifest = {{"modules", {{{"id", "A"}, {"path", "cross_module/a.mml"}}, {{"id", "B"}, {"path", "cross_module/b.mml"}}}},
                          {"imports", json::array({json::array({"A", "B"})})}};
  CHECK(post({{"manifest", inline_manifest}})->status == 200);

  auto syntax = post({{"files", {"broken.mml"}}});
  CHECK(syntax->status == 422);
  CHECK(json::parse(syntax->body)["error"] == "syntax");
  auto scope = post({{"files", {"unbound.mml"}}});
  CHECK(scope->status == 422);
  CHECK(json::parse(scope->body)["error"] == "resolve");
  CHECK_FALSE(json::parse(scope->body)["diagnostics"].empty());

  CHECK(post({{"files", json::array()}})->status == 400);
  CHECK(post({{"files", {"../secret.mml"}}})->status == 400);
  CHECK(post({{"files", {"missing.mml"}}})->status == 404);
  CHECK(post({{"files", {"fine.mml"}}, {"options", {{"weights", {1}}}}})->status == 400);
  CHECK(c.Post("/api/check", "{", "application/json")->status == 400);
}

TEST_CASE("concurrent checks and saves do not interfere") {
  Project p;
  Running s(p.root);
  std::vector<std::thread> threads;
  std::atomic<int> failures{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      auto c = s.client();
      for (int i = 0; i < 5; ++i) {
        if (t == 0) {
          auto text = i % 2 ? "x = 1\n" : "x = True\n";
          auto r = c.Put("/api/file", json{{"path", "fine.mml"}, {"content", text}}.dump(), "application/json");
          if (!r || r->status != 200) ++failures;
        } else {
          auto r = c.Post("/api/check", R"({"files": ["fine.mml", "concrete_types.mml"]})", "application/json");
          if (!r || r->status != 200) ++failures;
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  CHECK(failures == 0);
}

TEST_CASE("command line exit codes and output") {
  Project p;
  auto fine = run_cli(p.root, "check fine.mml");
  CHECK(fine.status == 0);
  CHECK(fine.out.find("no type errors") != std::string::npos);
  auto fine_json = run_cli(p.root, "check --json fine.mml");
  CHECK(fine_json.status == 0);
  CHECK(json::parse(fine_json.out)["errors"] == json::array());

  auto bad = run_cli(p.root, "check concrete_types.mml");
  CHECK(bad.status == 1);
  CHECK(bad.out.find("cause 1") != std::string::npos);

  CHECK(run_cli(p.root, "check broken.mml").status == 2);
  CHECK(run_cli(p.root, "check unbound.mml").status == 2);
  CHECK(run_cli(p.root, "check missing.mml").status == 2);
  CHECK(run_cli(p.root, "check").status == 2);
  CHECK(run_cli(p.root, "check --weights 1,2 fine.mml").status == 2);
  CHECK(run_cli(p.root, "check --manifest cross_module/manifest.json").status == 1);

  auto dump = run_cli(p.root, "check --dump-constraints concrete_types.mml");
  CHECK(dump.status == 0);
  CHECK(dump.out.find("type_check") != std::string::npos);
}

TEST_CASE("command line and service produce the same diagnosis") {
  Project p;
  Running s(p.root);
  auto c = s.client();
  for (const char* f : {"char_in_int_list.mml", "two_independent_errors.mml"}) {
    auto cli = run_cli(p.root, std::string("check --json ") + f);
    REQUIRE(cli.status == 1);
    auto api = c.Post("/api/check", json{{"files", {f}}}.dump(), "application/json");
    REQUIRE(api);
    CHECK(without_timing(json::parse(cli.out)) == without_timing(json::parse(api->body)));
  }
}
