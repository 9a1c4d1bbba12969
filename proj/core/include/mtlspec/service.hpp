#pragma once

// HTTP/JSON facade used by the authoring UI. Bodies mirror the `.vspec.json`
// node schema; every mutation carries the spec revision it was based on.
//
//   POST   /specs                              {name?, description?} or a spec document
//   GET    /specs/{id}
//   DELETE /specs/{id}?revision=
//   POST   /specs/{id}/templates               {parent?, after?, group, op?, predicate, revision}
//   PATCH  /specs/{id}/templates/{tid}         {op?, predicate?, group?, revision}
//   DELETE /specs/{id}/templates/{tid}?revision=
//   POST   /specs/{id}/negated                 {value, revision}
//   GET    /specs/{id}/mtl?mode=strict|extended
//   GET    /specs/{id}/templates/{tid}/exemplars?n=&seed=&negative=&dt=&duration=
//   POST   /monitor                            {formula, trace, at?}
//   GET    /healthz

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mtlspec {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::optional<std::filesystem::path> persistence_dir;
  /// Origins echoed in Access-Control-Allow-Origin; "*" allows any.
  std::vector<std::string> allowed_origins;
};

class Service {
 public:
  /// Loads every `<id>.vspec.json` from the persistence directory (creating
  /// it if needed); throws PersistenceError.
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds the listening socket and returns the bound port; throws BindError.
  int bind();
  /// Serves until stop(); binds first if needed.
  void run();
  /// run() on a background thread; returns once the server accepts requests.
  void start();
  void stop();

  int port() const noexcept;
  std::size_t spec_count() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mtlspec
