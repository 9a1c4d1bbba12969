#include <gtest/gtest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "mtlspec/monitor.hpp"
#include "mtlspec/mtl.hpp"
#include "mtlspec/service.hpp"

using namespace mtlspec;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override { start({}); }
  void TearDown() override {
    service_.reset();
    if (!dir_.empty()) fs::remove_all(dir_);
  }

  void start(ServiceConfig config) {
    service_.reset();
    config.port = 0;
    if (config.allowed_origins.empty()) config.allowed_origins = {"http://localhost:4200"};
    service_ = std::make_unique<Service>(config);
    service_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", service_->port());
  }

  struct Reply {
    int status;
    json body;
    httplib::Headers headers;
  };

  Reply wrap(const httplib::Result& r) {
    EXPECT_TRUE(r) << "no response";
    if (!r) return {0, nullptr, {}};
    json body = r->body.empty() ? json() : json::parse(r->body);
    return {r->status, body, r->headers};
  }
  Reply get(const std::string& path) { return wrap(client_->Get(path)); }
  Reply post(const std::string& path, const json& body) {
    return wrap(client_->Post(path, body.dump(), "application/json"));
  }
  Reply patch(const std::string& path, const json& body) {
    return wrap(client_->Patch(path, body.dump(), "application/json"));
  }
  Reply del(const std::string& path) { return wrap(client_->Delete(path)); }

  /// Creates a spec and returns {id, revision}.
  std::pair<std::string, std::uint64_t> create(const std::string& name) {
    const auto r = post("/specs", {{"name", name}});
    EXPECT_EQ(r.status, 201);
    return {r.body["id"], r.body["revision"]};
  }

  static json predicate(const char* signal, const char* rel, double threshold) {
    return {{"signal", signal}, {"relation", rel}, {"threshold", threshold}};
  }
  static json always(double lo, double hi) { return {{"kind", "Always"}, {"outer", {lo, hi}}}; }

  std::unique_ptr<Service> service_;
  std::unique_ptr<httplib::Client> client_;
  fs::path dir_;
};

}  // namespace

TEST_F(ServiceTest, Healthz) {
  const auto r = get("/healthz");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["status"], "ok");
}

TEST_F(ServiceTest, Example1EndToEnd) {
  auto [id, rev] = create("phi1");
  // template created as Now + predicate, then the operator is set
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1}, {"predicate", predicate("rpm", "<", 4000)}, {"revision", rev}});
  ASSERT_EQ(r.status, 201) << r.body;
  const std::string tid = r.body["template"];
  EXPECT_EQ(r.body["mtl"]["formula"], "(rpm < 4000)");
  r = patch("/specs/" + id + "/templates/" + tid, {{"op", always(0, 36)}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body["mtl"]["formula"], "[]_[0,36](rpm < 4000)");
  r = get("/specs/" + id + "/mtl");
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body["formula"], "[]_[0,36](rpm < 4000)");
  EXPECT_EQ(r.body["class"], "Safety");
  EXPECT_EQ(r.body["accepted"], true);
  EXPECT_TRUE(r.body["diagnostics"].empty());
  r = get("/specs/" + id + "/mtl?mode=strict");
  EXPECT_EQ(r.body["accepted"], true);
  EXPECT_EQ(r.body["mode"], "strict");
}

TEST_F(ServiceTest, GetMtlIsPure) {
  auto [id, rev] = create("pure");
  post("/specs/" + id + "/templates",
       {{"group", 1}, {"op", always(0, 5)}, {"predicate", predicate("x", ">", 1)}, {"revision", rev}});
  const auto a = client_->Get("/specs/" + id + "/mtl");
  const auto b = client_->Get("/specs/" + id + "/mtl");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(a->body, b->body);
}

TEST_F(ServiceTest, MalformedIntervalIs422) {
  auto [id, rev] = create("bad");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1}, {"predicate", predicate("x", ">", 1)}, {"revision", rev}});
  const std::string tid = r.body["template"];
  const auto before = get("/specs/" + id);
  r = patch("/specs/" + id + "/templates/" + tid,
            {{"op", {{"kind", "Always"}, {"outer", {5, 2}}}}, {"revision", before.body["revision"]}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "MalformedOperator");
  // nothing was applied
  EXPECT_EQ(get("/specs/" + id).body, before.body);
}

TEST_F(ServiceTest, RevisionsGuardMutations) {
  auto [id, rev] = create("rev");
  auto r = post("/specs/" + id + "/templates", {{"group", 1}, {"predicate", predicate("x", ">", 1)}});
  EXPECT_EQ(r.status, 428);
  r = post("/specs/" + id + "/templates",
           {{"group", 1}, {"predicate", predicate("x", ">", 1)}, {"revision", rev + 5}});
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.body["revision"], rev);
  r = post("/specs/" + id + "/templates",
           {{"group", 1}, {"predicate", predicate("x", ">", 1)}, {"revision", rev}});
  EXPECT_EQ(r.status, 201);
  EXPECT_EQ(r.body["revision"], rev + 1);
  // stale revision after a successful write
  r = post("/specs/" + id + "/negated", {{"value", true}, {"revision", rev}});
  EXPECT_EQ(r.status, 409);
}

TEST_F(ServiceTest, InvalidMutationsAreAtomic) {
  auto [id, rev] = create("atomic");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1}, {"predicate", predicate("x", ">", 1)}, {"revision", rev}});
  rev = r.body["revision"];
  const std::string tid = r.body["template"];
  const auto snapshot = get("/specs/" + id).body;

  // clearing the predicate of a leaf leaves it invalid
  r = patch("/specs/" + id + "/templates/" + tid, {{"predicate", nullptr}, {"revision", rev}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "LeafWithoutPredicate");
  // invalid signal name
  r = patch("/specs/" + id + "/templates/" + tid, {{"predicate", predicate("9x", ">", 1)}, {"revision", rev}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "InvalidSignalName");
  // unknown parent
  r = post("/specs/" + id + "/templates",
           {{"parent", "zz"}, {"group", 1}, {"predicate", predicate("x", ">", 1)}, {"revision", rev}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "UnknownParent");
  // group run split: add group 2 then try group 1 after it
  r = post("/specs/" + id + "/templates",
           {{"group", 2}, {"predicate", predicate("y", ">", 1)}, {"revision", rev}});
  ASSERT_EQ(r.status, 201);
  rev = r.body["revision"];
  const auto snapshot2 = get("/specs/" + id).body;
  r = post("/specs/" + id + "/templates",
           {{"group", 1}, {"predicate", predicate("z", ">", 1)}, {"revision", rev}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "NonContiguousGroup");
  EXPECT_EQ(get("/specs/" + id).body, snapshot2);
  EXPECT_NE(snapshot, snapshot2);
  // predicate is mandatory on creation
  r = post("/specs/" + id + "/templates", {{"group", 1}, {"revision", rev}});
  EXPECT_EQ(r.status, 400);
  // unknown fields are rejected
  r = post("/specs/" + id + "/negated", {{"value", true}, {"revision", rev}, {"colour", 1}});
  EXPECT_EQ(r.status, 400);
  r = wrap(client_->Post("/specs/" + id + "/negated", "{not json", "application/json"));
  EXPECT_EQ(r.status, 400);
}

TEST_F(ServiceTest, BuildPhi7WithStructuralEdits) {
  auto [id, rev] = create("phi7");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1}, {"op", always(0, 40)}, {"predicate", predicate("speed", "<", 80)}, {"revision", rev}});
  const std::string parent = r.body["template"];
  r = post("/specs/" + id + "/templates",
           {{"parent", parent}, {"group", 2}, {"op", always(0, 40)},
            {"predicate", predicate("rpm", "<", 4000)}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 201) << r.body;
  const std::string child = r.body["template"];
  EXPECT_EQ(r.body["mtl"]["formula"], "[]_[0,40]((speed < 80) -> ([]_[0,40](rpm < 4000)))");
  EXPECT_EQ(r.body["mtl"]["class"], "ReactiveResponse");
  // parent may become structural because it has a child
  r = patch("/specs/" + id + "/templates/" + parent, {{"predicate", nullptr}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body["mtl"]["formula"], "[]_[0,40]([]_[0,40](rpm < 4000))");
  r = patch("/specs/" + id + "/templates/" + parent,
            {{"predicate", predicate("speed", "<", 80)}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 200);
  // regroup the child into the parent's group: -> becomes /\.
  r = patch("/specs/" + id + "/templates/" + child, {{"group", 1}, {"revision", r.body["revision"]}});
  EXPECT_EQ(r.body["mtl"]["formula"], "[]_[0,40]((speed < 80) /\\ ([]_[0,40](rpm < 4000)))");
  EXPECT_EQ(r.body["mtl"]["class"], "NonStrictSequencing");
  // remove the child
  r = del("/specs/" + id + "/templates/" + child + "?revision=" + std::to_string(r.body["revision"].get<int>()));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body["mtl"]["formula"], "[]_[0,40](speed < 80)");
  r = del("/specs/" + id + "/templates/" + child + "?revision=" + std::to_string(r.body["revision"].get<int>()));
  EXPECT_EQ(r.status, 404);
  r = del("/specs/" + id + "/templates/" + parent);
  EXPECT_EQ(r.status, 428);
}

TEST_F(ServiceTest, NegationAndStrictMode) {
  auto [id, rev] = create("task5");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1},
                 {"op", {{"kind", "RepeatedlyOftenAndFinally"}, {"outer", {0, 40}}, {"inner", {0, 10}}}},
                 {"predicate", predicate("speed", ">", 100)},
                 {"revision", rev}});
  r = post("/specs/" + id + "/negated", {{"value", true}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["mtl"]["formula"], "!([]_[0,40](<>_[0,10](speed > 100)))");
  EXPECT_EQ(r.body["mtl"]["class"], "Recurrence");
  EXPECT_EQ(r.body["mtl"]["negated"], true);
  EXPECT_EQ(get("/specs/" + id + "/mtl?mode=bogus").status, 400);
}

TEST_F(ServiceTest, StrictRejectionReportsDiagnostics) {
  // ([](a /\ []b)) -> <>c : the left of -> is not a P, so only extended accepts
  auto [id, rev] = create("deep");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1}, {"op", always(0, 1)}, {"predicate", predicate("a", ">", 0)}, {"revision", rev}});
  const std::string n1 = r.body["template"];
  r = post("/specs/" + id + "/templates",
           {{"parent", n1}, {"group", 1}, {"op", always(0, 1)}, {"predicate", predicate("b", ">", 0)},
            {"revision", r.body["revision"]}});
  r = post("/specs/" + id + "/templates",
           {{"group", 2}, {"op", {{"kind", "AtLeastOnce"}, {"outer", {0, 1}}}},
            {"predicate", predicate("c", ">", 0)}, {"revision", r.body["revision"]}});
  ASSERT_EQ(r.status, 201) << r.body;
  EXPECT_EQ(r.body["mtl"]["formula"], "([]_[0,1]((a > 0) /\\ ([]_[0,1](b > 0)))) -> (<>_[0,1](c > 0))");
  r = get("/specs/" + id + "/mtl?mode=strict");
  EXPECT_EQ(r.body["accepted"], false);
  ASSERT_FALSE(r.body["diagnostics"].empty());
  EXPECT_EQ(r.body["diagnostics"][0]["kind"], "NotInFragment");
  EXPECT_EQ(r.body["formula"], "([]_[0,1]((a > 0) /\\ ([]_[0,1](b > 0)))) -> (<>_[0,1](c > 0))");
  EXPECT_EQ(get("/specs/" + id + "/mtl").body["accepted"], true);
}

TEST_F(ServiceTest, Exemplars) {
  auto [id, rev] = create("phi3");
  auto r = post("/specs/" + id + "/templates",
                {{"group", 1},
                 {"op", {{"kind", "EventuallyAlways"}, {"outer", {0, 30}}, {"inner", {0, 10}}}},
                 {"predicate", predicate("speed", ">", 100)},
                 {"revision", rev}});
  const std::string tid = r.body["template"];
  r = get("/specs/" + id + "/templates/" + tid + "/exemplars?n=3&seed=42");
  ASSERT_EQ(r.status, 200) << r.body;
  ASSERT_EQ(r.body["traces"].size(), 3u);
  const auto f = parse(r.body["formula"].get<std::string>());
  for (const auto& item : r.body["traces"]) {
    const Trace t(item["time"].get<std::vector<double>>(),
                  {{"speed", item["signals"]["speed"].get<std::vector<double>>()}});
    EXPECT_TRUE(evaluate(f, t));
  }
  // reproducible by seed
  EXPECT_EQ(get("/specs/" + id + "/templates/" + tid + "/exemplars?n=3&seed=42").body, r.body);
  r = get("/specs/" + id + "/templates/" + tid + "/exemplars?n=2&seed=1&negative=true");
  ASSERT_EQ(r.status, 200);
  for (const auto& item : r.body["traces"]) {
    const Trace t(item["time"].get<std::vector<double>>(),
                  {{"speed", item["signals"]["speed"].get<std::vector<double>>()}});
    EXPECT_FALSE(evaluate(f, t));
  }
  EXPECT_EQ(get("/specs/" + id + "/templates/zz/exemplars").status, 404);
  EXPECT_EQ(get("/specs/" + id + "/templates/" + tid + "/exemplars?n=0").status, 422);
  EXPECT_EQ(get("/specs/" + id + "/templates/" + tid + "/exemplars?seed=abc").status, 400);
  EXPECT_EQ(get("/specs/" + id + "/templates/" + tid + "/exemplars?vmin=0&vmax=50").body["error"],
            "ThresholdOutOfRange");
}

TEST_F(ServiceTest, Monitor) {
  auto r = post("/monitor", {{"formula", "<>_[0,2](x > 1)"},
                             {"trace", {{"time", {0, 1, 2}}, {"signals", {{"x", {0, 2, 0}}}}}}});
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.body["result"], true);
  EXPECT_EQ(r.body["horizon"]["required"], 2.0);
  r = post("/monitor", {{"formula", "[]_[0,2](x > 1)"}, {"trace", "time,x\n0,0\n1,2\n2,0\n"}});
  EXPECT_EQ(r.body["result"], false);
  r = post("/monitor", {{"formula", "[]_[0,5](x > 1)"}, {"trace", "time,x\n0,0\n1,2\n"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "InsufficientHorizon");
  EXPECT_EQ(r.body["horizon"]["ok"], false);
  r = post("/monitor", {{"formula", "(x > 1) U (y > 1)"}, {"trace", "time,x\n0,0\n"}});
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.body["error"], "SyntaxError");
  EXPECT_TRUE(r.body.contains("column"));
  r = post("/monitor", {{"formula", "x > 1"}, {"trace", "time,x\n0,0\n0,1\n"}});
  EXPECT_EQ(r.status, 400);
  EXPECT_EQ(r.body["error"], "NonMonotoneTime");
  r = post("/monitor", {{"formula", "y > 1"}, {"trace", "time,x\n0,0\n"}});
  EXPECT_EQ(r.body["error"], "UnknownSignal");
}

TEST_F(ServiceTest, SpecLifecycleAndImport) {
  EXPECT_EQ(get("/specs/nope").status, 404);
  const json doc = {{"version", 1},
                    {"name", "imported"},
                    {"negated", false},
                    {"nodes",
                     {{{"id", "n1"}, {"order", 0}, {"group", 1},
                       {"op", {{"kind", "AtLeastOnce"}, {"outer", {0, 39}}}},
                       {"predicate", predicate("speed", ">", 100)}}}}};
  auto r = post("/specs", doc);
  ASSERT_EQ(r.status, 201) << r.body;
  const std::string id = r.body["id"];
  EXPECT_EQ(r.body["mtl"]["formula"], "<>_[0,39](speed > 100)");
  EXPECT_EQ(r.body["spec"]["nodes"][0]["id"], "n1");
  EXPECT_EQ(service_->spec_count(), 1u);
  EXPECT_EQ(del("/specs/" + id).status, 428);
  EXPECT_EQ(del("/specs/" + id + "?revision=1").status, 204);
  EXPECT_EQ(get("/specs/" + id).status, 404);
  EXPECT_EQ(service_->spec_count(), 0u);
}

TEST_F(ServiceTest, Cors) {
  auto r = client_->Get("/healthz", {{"Origin", "http://localhost:4200"}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "http://localhost:4200");
  r = client_->Get("/healthz", {{"Origin", "http://evil.example"}});
  EXPECT_FALSE(r->has_header("Access-Control-Allow-Origin"));
  r = client_->Options("/specs", {{"Origin", "http://localhost:4200"}});
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_NE(r->get_header_value("Access-Control-Allow-Methods").find("PATCH"), std::string::npos);
}

TEST_F(ServiceTest, PersistenceDirectory) {
  dir_ = fs::temp_directory_path() / ("mtlspec-service-" + std::to_string(::getpid()));
  fs::remove_all(dir_);
  ServiceConfig config;
  config.persistence_dir = dir_;
  start(config);
  auto [id, rev] = create("kept");
  post("/specs/" + id + "/templates",
       {{"group", 1}, {"op", always(0, 36)}, {"predicate", predicate("rpm", "<", 4000)}, {"revision", rev}});
  EXPECT_TRUE(fs::exists(dir_ / (id + ".vspec.json")));
  auto [gone, gone_rev] = create("dropped");
  EXPECT_EQ(del("/specs/" + gone + "?revision=" + std::to_string(gone_rev)).status, 204);
  EXPECT_FALSE(fs::exists(dir_ / (gone + ".vspec.json")));

  start(config);  // fresh process view of the same directory
  EXPECT_EQ(service_->spec_count(), 1u);
  const auto r = get("/specs/" + id + "/mtl");
  EXPECT_EQ(r.body["formula"], "[]_[0,36](rpm < 4000)");
}

TEST_F(ServiceTest, BindErrorOnBusyPort) {
  ServiceConfig config;
  config.port = service_->port();
  Service second(config);
  try {
    second.bind();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BindError);
  }
}

TEST_F(ServiceTest, ConcurrentWritersSerialize) {
  auto [id, rev] = create("race");
  post("/specs/" + id + "/templates",
       {{"group", 1}, {"op", always(0, 1)}, {"predicate", predicate("x", ">", 0)}, {"revision", rev}});
  // every writer races on the same revision; exactly one must win
  const std::uint64_t base = get("/specs/" + id).body["revision"];
  std::vector<int> statuses(6);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < statuses.size(); ++i) {
    threads.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", service_->port());
      const json body = {{"value", i % 2 == 0}, {"revision", base}};
      auto r = c.Post("/specs/" + id + "/negated", body.dump(), "application/json");
      statuses[i] = r ? r->status : -1;
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 200), 1);
  EXPECT_EQ(std::count(statuses.begin(), statuses.end(), 409), 5);
  EXPECT_EQ(get("/specs/" + id).body["revision"], base + 1);
}
