#include "mtlspec/service.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "mtlspec/error.hpp"
#include "mtlspec/exemplar.hpp"
#include "mtlspec/fragment.hpp"
#include "mtlspec/monitor.hpp"
#include "mtlspec/persistence.hpp"
#include "mtlspec/translator.hpp"

namespace mtlspec {

using nlohmann::json;

namespace {

constexpr const char* kSpecSuffix = ".vspec.json";

/// Failure that maps straight onto an HTTP status.
struct HttpError {
  int status;
  std::string code;
  std::string message;
  json extra = json::object();
};

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::SchemaError:
    case ErrorCode::VersionMismatch:
    case ErrorCode::CsvError:
    case ErrorCode::NonMonotoneTime:
    case ErrorCode::InvalidTrace:
      return 400;
    case ErrorCode::PersistenceError:
    case ErrorCode::IoError:
      return 500;
    default:
      return 422;
  }
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, const HttpError& e) {
  json body = e.extra;
  body["error"] = e.code;
  body["message"] = e.message;
  send(res, e.status, body);
}

[[noreturn]] void bad_request(const std::string& message) {
  throw HttpError{400, "SchemaError", message};
}

json parse_body(const httplib::Request& req) {
  json body;
  try {
    body = json::parse(req.body.empty() ? std::string("{}") : req.body);
  } catch (const json::parse_error& e) {
    bad_request(std::string("malformed JSON body: ") + e.what());
  }
  if (!body.is_object()) bad_request("body must be a JSON object");
  return body;
}

void only_fields(const json& object, std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      bad_request("unknown field '" + key + "'");
    }
  }
}

std::optional<std::string> optional_string(const json& body, const char* key) {
  auto it = body.find(key);
  if (it == body.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) bad_request(std::string(key) + ": expected a string");
  return it->get<std::string>();
}

int group_value(const json& v) {
  if (!v.is_number_integer()) bad_request("group: expected an integer");
  const auto g = v.get<long long>();
  if (g < std::numeric_limits<int>::min() || g > std::numeric_limits<int>::max()) {
    throw HttpError{422, "NonPositiveGroup", "group out of range"};
  }
  return static_cast<int>(g);
}

// Interval validity is left to spec-model so that bad bounds surface as
// MalformedOperator.
Interval interval_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    bad_request(where + ": expected [lo, hi]");
  }
  return Interval{v[0].get<double>(), v[1].get<double>()};
}

TemporalOperator operator_value(const json& v) {
  if (!v.is_object()) bad_request("op: expected an object");
  only_fields(v, {"kind", "outer", "inner"});
  const auto kind_text = optional_string(v, "kind");
  if (!kind_text) bad_request("op.kind: missing");
  const auto kind = operator_kind_from_string(*kind_text);
  if (!kind) bad_request("op.kind: unknown operator kind '" + *kind_text + "'");
  TemporalOperator op;
  op.kind = *kind;
  if (v.contains("outer")) op.outer = interval_value(v["outer"], "op.outer");
  if (v.contains("inner")) op.inner = interval_value(v["inner"], "op.inner");
  return op;
}

Predicate predicate_value(const json& v) {
  if (!v.is_object()) bad_request("predicate: expected an object");
  only_fields(v, {"signal", "relation", "threshold"});
  Predicate p;
  const auto signal = optional_string(v, "signal");
  if (!signal) bad_request("predicate.signal: missing");
  p.signal = *signal;
  const auto rel_text = optional_string(v, "relation");
  if (!rel_text) bad_request("predicate.relation: missing");
  const auto rel = relation_from_string(*rel_text);
  if (!rel) bad_request("predicate.relation: expected one of <, >, <=, >=");
  p.relation = *rel;
  auto it = v.find("threshold");
  if (it == v.end() || !it->is_number()) bad_request("predicate.threshold: expected a number");
  p.threshold = it->get<double>();
  return p;
}

std::uint64_t revision_value(const json& v) {
  if (!v.is_number_unsigned()) bad_request("revision: expected a non-negative integer");
  return v.get<std::uint64_t>();
}

std::optional<std::uint64_t> revision_of(const json& body) {
  auto it = body.find("revision");
  if (it == body.end()) return std::nullopt;
  return revision_value(*it);
}

std::optional<std::uint64_t> revision_of(const httplib::Request& req) {
  if (!req.has_param("revision")) return std::nullopt;
  const auto text = req.get_param_value("revision");
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    bad_request("revision: expected a non-negative integer");
  }
  return value;
}

template <typename T>
T query_number(const httplib::Request& req, const char* key, T fallback) {
  if (!req.has_param(key)) return fallback;
  const auto text = req.get_param_value(key);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    bad_request(std::string(key) + ": not a number");
  }
  return value;
}

bool query_flag(const httplib::Request& req, const char* key) {
  if (!req.has_param(key)) return false;
  const auto text = req.get_param_value(key);
  if (text == "true" || text == "1" || text.empty()) return true;
  if (text == "false" || text == "0") return false;
  bad_request(std::string(key) + ": expected true or false");
}

json diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json out = json::array();
  for (const auto& d : diagnostics) {
    out.push_back({{"kind", std::string(to_string(d.kind))}, {"node", d.node}, {"message", d.message}});
  }
  return out;
}

json horizon_json(const HorizonCheck& h) {
  return {{"ok", h.ok}, {"required", h.required}, {"available", h.available}};
}

json trace_json(const Trace& trace) {
  json signals = json::object();
  for (const auto& [name, values] : trace.signals()) signals[name] = values;
  return {{"time", trace.times()}, {"signals", std::move(signals)}};
}

Trace trace_value(const json& v) {
  if (v.is_string()) return trace_from_csv(v.get<std::string>());
  if (!v.is_object()) bad_request("trace: expected CSV text or {time, signals}");
  only_fields(v, {"time", "signals"});
  if (!v.contains("time") || !v["time"].is_array()) bad_request("trace.time: expected an array");
  if (!v.contains("signals") || !v["signals"].is_object()) {
    bad_request("trace.signals: expected an object");
  }
  auto numbers = [](const json& array, const std::string& where) {
    if (!array.is_array()) bad_request(where + ": expected an array");
    std::vector<double> out;
    for (const auto& x : array) {
      if (!x.is_number()) bad_request(where + ": expected numbers");
      out.push_back(x.get<double>());
    }
    return out;
  };
  std::vector<Trace::Column> columns;
  for (const auto& [name, values] : v["signals"].items()) {
    columns.emplace_back(name, numbers(values, "trace.signals." + name));
  }
  return Trace(numbers(v["time"], "trace.time"), std::move(columns));
}

json mtl_json(const SpecTree& tree, FragmentMode mode) {
  json out;
  out["mode"] = mode == FragmentMode::Strict ? "strict" : "extended";
  out["formula"] = nullptr;
  out["class"] = nullptr;
  out["negated"] = tree.negated();
  out["accepted"] = false;
  const auto diagnostics = validate_structure(tree);
  if (!diagnostics.empty()) {
    out["diagnostics"] = diagnostics_json(diagnostics);
    return out;
  }
  json problems = json::array();
  try {
    const Formula f = translate(tree);
    out["formula"] = format(f);
    const auto c = classify(f);
    out["class"] = std::string(to_string(c.label));
    const auto rec = recognize(f, mode);
    out["accepted"] = rec.accepted;
    if (!rec.accepted) {
      problems.push_back({{"kind", "NotInFragment"}, {"node", nullptr}, {"message", rec.reason}});
    }
  } catch (const Error& e) {
    problems.push_back({{"kind", std::string(to_string(e.code()))}, {"node", nullptr}, {"message", e.what()}});
  }
  out["diagnostics"] = std::move(problems);
  return out;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

struct Service::Impl {
  struct Entry {
    mutable std::shared_mutex mutex;
    SpecTree tree;
    std::uint64_t revision = 1;
  };

  ServiceConfig config;
  httplib::Server server;
  std::thread worker;
  int bound_port = -1;

  mutable std::shared_mutex store_mutex;
  std::map<std::string, std::shared_ptr<Entry>> specs;
  std::mutex id_mutex;
  std::mt19937_64 id_source{std::random_device{}()};

  explicit Impl(ServiceConfig c) : config(std::move(c)) {
    // httplib's default adds SO_REUSEPORT, which would let a second service
    // share a busy port instead of failing with BindError.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof yes);
    });
    load_directory();
    routes();
  }

  // -- persistence ----------------------------------------------------------

  std::filesystem::path file_for(const std::string& id) const {
    return *config.persistence_dir / (id + kSpecSuffix);
  }

  void load_directory() {
    if (!config.persistence_dir) return;
    namespace fs = std::filesystem;
    const auto& dir = *config.persistence_dir;
    try {
      fs::create_directories(dir);
      for (const auto& item : fs::directory_iterator(dir)) {
        const auto name = item.path().filename().string();
        if (!item.is_regular_file() || !ends_with(name, kSpecSuffix)) continue;
        const auto id = name.substr(0, name.size() - std::string_view(kSpecSuffix).size());
        auto entry = std::make_shared<Entry>();
        entry->tree = load_spec(item.path());
        if (!validate_structure(entry->tree).empty()) {
          throw Error(ErrorCode::PersistenceError, "'" + name + "' fails structural validation");
        }
        specs.emplace(id, std::move(entry));
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::PersistenceError) throw;
      throw Error(ErrorCode::PersistenceError, e.what());
    } catch (const fs::filesystem_error& e) {
      throw Error(ErrorCode::PersistenceError, e.what());
    }
  }

  void persist(const std::string& id, const SpecTree& tree) const {
    if (!config.persistence_dir) return;
    const auto target = file_for(id);
    auto staging = target;
    staging += ".tmp";
    try {
      save_spec(tree, staging);
      std::filesystem::rename(staging, target);
    } catch (const std::exception& e) {
      throw HttpError{500, "PersistenceError", e.what()};
    }
  }

  void unpersist(const std::string& id) const {
    if (!config.persistence_dir) return;
    std::error_code ec;
    std::filesystem::remove(file_for(id), ec);
    if (ec) throw HttpError{500, "PersistenceError", ec.message()};
  }

  // -- store ----------------------------------------------------------------

  std::string fresh_id() {
    static constexpr char kHex[] = "0123456789abcdef";
    std::lock_guard lock(id_mutex);
    std::string id;
    do {
      auto bits = id_source();
      id.assign(12, '0');
      for (auto& c : id) {
        c = kHex[bits & 15];
        bits >>= 4;
      }
    } while (specs.count(id) != 0);
    return id;
  }

  std::shared_ptr<Entry> lookup(const std::string& id) const {
    std::shared_lock lock(store_mutex);
    auto it = specs.find(id);
    if (it == specs.end()) throw HttpError{404, "UnknownSpec", "no spec '" + id + "'"};
    return it->second;
  }

  static void check_revision(const Entry& entry, std::optional<std::uint64_t> given) {
    if (!given) {
      throw HttpError{428, "RevisionRequired", "mutations must carry the current revision",
                      {{"revision", entry.revision}}};
    }
    if (*given != entry.revision) {
      throw HttpError{409, "RevisionConflict",
                      "revision " + std::to_string(*given) + " is stale",
                      {{"revision", entry.revision}}};
    }
  }

  static json spec_json(const std::string& id, const SpecTree& tree, std::uint64_t revision) {
    return {{"id", id},
            {"revision", revision},
            {"spec", json::parse(spec_to_json(tree))},
            {"mtl", mtl_json(tree, FragmentMode::Extended)}};
  }

  /// Applies `change` to a copy, validates, persists, then publishes.
  template <typename Change>
  json mutate(const std::string& id, std::optional<std::uint64_t> revision, Change&& change) {
    auto entry = lookup(id);
    std::unique_lock lock(entry->mutex);
    check_revision(*entry, revision);
    SpecTree draft = entry->tree;
    json extra = change(draft);
    const auto diagnostics = validate_structure(draft);
    if (!diagnostics.empty()) {
      throw HttpError{422, std::string(to_string(diagnostics.front().kind)),
                      diagnostics.front().message,
                      {{"diagnostics", diagnostics_json(diagnostics)}, {"revision", entry->revision}}};
    }
    persist(id, draft);
    entry->tree = std::move(draft);
    ++entry->revision;
    json out = spec_json(id, entry->tree, entry->revision);
    for (auto& [key, value] : extra.items()) out[key] = value;
    return out;
  }

  // -- routing --------------------------------------------------------------

  template <typename Handler>
  httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const HttpError& e) {
        send_error(res, e);
      } catch (const Error& e) {
        json extra = json::object();
        if (e.line() != 0) {
          extra["line"] = e.line();
          extra["column"] = e.column();
        }
        send_error(res, HttpError{status_for(e.code()), std::string(to_string(e.code())), e.what(),
                                  std::move(extra)});
      } catch (const json::exception& e) {
        send_error(res, HttpError{400, "SchemaError", e.what()});
      }
    };
  }

  void routes() {
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res,
                                    std::exception_ptr ep) {
      std::string message = "internal error";
      try {
        if (ep) std::rethrow_exception(ep);
      } catch (const std::exception& e) {
        message = e.what();
      } catch (...) {
      }
      send_error(res, HttpError{500, "InternalError", message});
    });

    server.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
      const auto origin = req.get_header_value("Origin");
      for (const auto& allowed : config.allowed_origins) {
        if (allowed == "*") {
          res.set_header("Access-Control-Allow-Origin", "*");
          return;
        }
        if (!origin.empty() && allowed == origin) {
          res.set_header("Access-Control-Allow-Origin", origin);
          res.set_header("Vary", "Origin");
          return;
        }
      }
    });

    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, PATCH, DELETE, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      send(res, 200, {{"status", "ok"}});
    });

    server.Post("/specs", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      SpecTree tree;
      if (body.contains("version") || body.contains("nodes")) {
        tree = spec_from_json(body.dump());
      } else {
        only_fields(body, {"name", "description"});
        tree = new_spec(optional_string(body, "name").value_or("untitled"));
        tree.set_description(optional_string(body, "description").value_or(""));
      }
      const auto diagnostics = validate_structure(tree);
      if (!diagnostics.empty()) {
        throw HttpError{422, std::string(to_string(diagnostics.front().kind)),
                        diagnostics.front().message, {{"diagnostics", diagnostics_json(diagnostics)}}};
      }
      std::unique_lock lock(store_mutex);
      const auto id = fresh_id();
      persist(id, tree);
      auto entry = std::make_shared<Entry>();
      entry->tree = std::move(tree);
      specs.emplace(id, entry);
      send(res, 201, spec_json(id, entry->tree, entry->revision));
    }));

    server.Get(R"(/specs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      auto entry = lookup(id);
      std::shared_lock lock(entry->mutex);
      send(res, 200, spec_json(id, entry->tree, entry->revision));
    }));

    server.Delete(R"(/specs/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const auto revision = revision_of(req);
      std::unique_lock store_lock(store_mutex);
      auto it = specs.find(id);
      if (it == specs.end()) throw HttpError{404, "UnknownSpec", "no spec '" + id + "'"};
      std::unique_lock lock(it->second->mutex);
      check_revision(*it->second, revision);
      unpersist(id);
      lock.unlock();
      specs.erase(it);
      res.status = 204;
    }));

    server.Post(R"(/specs/([^/]+)/templates)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const json body = parse_body(req);
      only_fields(body, {"parent", "after", "group", "op", "predicate", "revision"});
      if (!body.contains("group")) bad_request("group: missing");
      if (!body.contains("predicate") || body["predicate"].is_null()) {
        bad_request("predicate: missing (templates are created with a predicate)");
      }
      const int group = group_value(body["group"]);
      const auto parent = optional_string(body, "parent");
      const auto after = optional_string(body, "after");
      std::optional<TemporalOperator> op;
      if (body.contains("op")) op = operator_value(body["op"]);
      const Predicate predicate = predicate_value(body["predicate"]);
      json out = mutate(id, revision_of(body), [&](SpecTree& tree) {
        const NodeId node = tree.add_template(parent, after, group);
        if (op) tree.set_operator(node, *op);
        tree.set_predicate(node, predicate);
        return json{{"template", node}};
      });
      send(res, 201, out);
    }));

    server.Patch(R"(/specs/([^/]+)/templates/([^/]+))",
                 guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const std::string node = req.matches[2];
      const json body = parse_body(req);
      only_fields(body, {"op", "predicate", "group", "revision"});
      std::optional<TemporalOperator> op;
      if (body.contains("op")) op = operator_value(body["op"]);
      std::optional<int> group;
      if (body.contains("group")) group = group_value(body["group"]);
      const bool touches_predicate = body.contains("predicate");
      std::optional<Predicate> predicate;
      if (touches_predicate && !body["predicate"].is_null()) predicate = predicate_value(body["predicate"]);
      json out = mutate(id, revision_of(body), [&](SpecTree& tree) {
        if (tree.find(node) == nullptr) throw HttpError{404, "UnknownNode", "no template '" + node + "'"};
        if (op) tree.set_operator(node, *op);
        if (group) tree.set_group(node, *group);
        if (predicate) {
          tree.set_predicate(node, *predicate);
        } else if (touches_predicate) {
          tree.clear_predicate(node);
        }
        return json{{"template", node}};
      });
      send(res, 200, out);
    }));

    server.Delete(R"(/specs/([^/]+)/templates/([^/]+))",
                  guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const std::string node = req.matches[2];
      json out = mutate(id, revision_of(req), [&](SpecTree& tree) {
        if (tree.find(node) == nullptr) throw HttpError{404, "UnknownNode", "no template '" + node + "'"};
        tree.remove_template(node);
        return json::object();
      });
      send(res, 200, out);
    }));

    server.Post(R"(/specs/([^/]+)/negated)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const json body = parse_body(req);
      only_fields(body, {"value", "revision"});
      if (!body.contains("value") || !body["value"].is_boolean()) bad_request("value: expected a boolean");
      const bool value = body["value"].get<bool>();
      json out = mutate(id, revision_of(body), [&](SpecTree& tree) {
        tree.set_negated(value);
        return json::object();
      });
      send(res, 200, out);
    }));

    server.Get(R"(/specs/([^/]+)/mtl)", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      FragmentMode mode = FragmentMode::Extended;
      if (req.has_param("mode")) {
        const auto text = req.get_param_value("mode");
        if (text == "strict") {
          mode = FragmentMode::Strict;
        } else if (text != "extended") {
          bad_request("mode: expected strict or extended");
        }
      }
      auto entry = lookup(id);
      std::shared_lock lock(entry->mutex);
      json out = mtl_json(entry->tree, mode);
      out["revision"] = entry->revision;
      send(res, 200, out);
    }));

    server.Get(R"(/specs/([^/]+)/templates/([^/]+)/exemplars)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
      const std::string id = req.matches[1];
      const std::string node = req.matches[2];
      const int n = query_number<int>(req, "n", 4);
      if (n < 1 || n > 64) throw HttpError{422, "InvalidConfig", "n must be within 1..64"};
      const auto seed = query_number<std::uint64_t>(req, "seed", 0);
      const bool negative = query_flag(req, "negative");
      ExemplarConfig config;
      config.dt = query_number<double>(req, "dt", config.dt);
      if (req.has_param("duration")) config.duration = query_number<double>(req, "duration", 0.0);
      if (req.has_param("vmin")) config.vmin = query_number<double>(req, "vmin", 0.0);
      if (req.has_param("vmax")) config.vmax = query_number<double>(req, "vmax", 0.0);

      auto entry = lookup(id);
      SpecTree tree;
      std::uint64_t revision = 0;
      {
        std::shared_lock lock(entry->mutex);
        tree = entry->tree;
        revision = entry->revision;
      }
      if (tree.find(node) == nullptr) throw HttpError{404, "UnknownNode", "no template '" + node + "'"};
      const Formula f = template_formula(tree, node);
      const auto traces = negative ? counterexemplar(f, n, seed, config) : generate(f, n, seed, config);
      json items = json::array();
      for (const auto& e : traces) {
        json item = trace_json(e.trace);
        item["archetype"] = std::string(to_string(e.archetype));
        items.push_back(std::move(item));
      }
      send(res, 200,
           {{"template", node}, {"formula", format(f)}, {"seed", seed}, {"negative", negative},
            {"revision", revision}, {"traces", std::move(items)}});
    }));

    server.Post("/monitor", guarded([](const httplib::Request& req, httplib::Response& res) {
      const json body = parse_body(req);
      only_fields(body, {"formula", "trace", "at"});
      const auto text = optional_string(body, "formula");
      if (!text) bad_request("formula: missing");
      if (!body.contains("trace")) bad_request("trace: missing");
      std::size_t at = 0;
      if (body.contains("at")) {
        if (!body["at"].is_number_unsigned()) bad_request("at: expected a sample index");
        at = body["at"].get<std::size_t>();
      }
      const Formula f = parse(*text);
      const Trace trace = trace_value(body["trace"]);
      const auto horizon = check_horizon(f, trace);
      try {
        const bool result = evaluate(f, trace, at);
        send(res, 200, {{"formula", format(f)}, {"at", at}, {"result", result},
                        {"horizon", horizon_json(horizon)}});
      } catch (const Error& e) {
        throw HttpError{status_for(e.code()), std::string(to_string(e.code())), e.what(),
                        {{"horizon", horizon_json(horizon)}}};
      }
    }));
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Service::~Service() { stop(); }

int Service::bind() {
  if (impl_->bound_port >= 0) return impl_->bound_port;
  auto& c = impl_->config;
  if (c.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(c.host);
  } else if (impl_->server.bind_to_port(c.host, c.port)) {
    impl_->bound_port = c.port;
  }
  if (impl_->bound_port < 0) {
    impl_->bound_port = -1;
    throw Error(ErrorCode::BindError, "cannot bind " + c.host + ":" + std::to_string(c.port));
  }
  return impl_->bound_port;
}

void Service::run() {
  bind();
  impl_->server.listen_after_bind();
}

void Service::start() {
  bind();
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void Service::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

int Service::port() const noexcept { return impl_->bound_port; }

std::size_t Service::spec_count() const {
  std::shared_lock lock(impl_->store_mutex);
  return impl_->specs.size();
}

}  // namespace mtlspec
