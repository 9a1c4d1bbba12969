// mtlspec command-line front end.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mtlspec/corpus.hpp"
#include "mtlspec/exemplar.hpp"
#include "mtlspec/fragment.hpp"
#include "mtlspec/monitor.hpp"
#include "mtlspec/persistence.hpp"
#include "mtlspec/service.hpp"
#include "mtlspec/translator.hpp"

#ifndef MTLSPEC_VERSION
#define MTLSPEC_VERSION "0.1.0"
#endif

namespace {

using namespace mtlspec;

mtlspec::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

std::string class_text(const Classification& c) {
  std::string out(to_string(c.label));
  if (c.negated) out += " (negated)";
  return out;
}

int cmd_validate(const std::string& path) {
  const SpecTree tree = load_spec(path);
  const auto diagnostics = validate_structure(tree);
  for (const auto& d : diagnostics) {
    std::cout << to_string(d.kind) << " " << d.node << ": " << d.message << "\n";
  }
  if (!diagnostics.empty()) return 1;
  std::cout << "ok: " << tree.node_count() << " template(s)\n";
  return 0;
}

int cmd_translate(const std::string& path, bool strict) {
  const Formula f = translate(load_spec(path));
  std::cout << format(f) << "\n";
  if (strict) {
    const auto rec = recognize(f, FragmentMode::Strict);
    if (!rec.accepted) {
      std::cerr << "not in the strict fragment: " << rec.reason << "\n";
      return 1;
    }
  }
  return 0;
}

int cmd_exemplar(const std::string& path, const std::string& node, int count, std::uint64_t seed,
                 std::optional<double> dt, std::optional<double> duration, bool negative,
                 const std::string& out_dir) {
  const SpecTree tree = load_spec(path);
  const Formula f = template_formula(tree, node);
  ExemplarConfig config;
  if (dt) config.dt = *dt;
  config.duration = duration;
  const auto traces = negative ? counterexemplar(f, count, seed, config) : generate(f, count, seed, config);
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const auto file = std::filesystem::path(out_dir) /
                      (node + (negative ? "-neg-" : "-") + std::to_string(i + 1) + ".csv");
    save_trace(traces[i].trace, file);
    std::cout << file.string() << " " << to_string(traces[i].archetype) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Template-based MTL specification toolkit"};
  app.set_version_flag("--version", std::string(MTLSPEC_VERSION));
  app.require_subcommand(1);

  std::string spec_path, formula_text, trace_path, node, out_dir = ".";
  bool strict = false, negative = false;
  std::size_t at = 0;
  int count = 4, port = 8080;
  std::uint64_t seed = 0;
  std::optional<double> dt, duration;
  std::optional<std::string> persist_dir;
  std::vector<std::string> origins;
  std::string host = "127.0.0.1";

  auto* validate = app.add_subcommand("validate", "Check a spec document's structure");
  validate->add_option("spec", spec_path, "Path to a .vspec.json file")->required();

  auto* translate_cmd = app.add_subcommand("translate", "Print the MTL formula of a spec");
  translate_cmd->add_option("spec", spec_path, "Path to a .vspec.json file")->required();
  translate_cmd->add_flag("--strict", strict, "Fail unless the formula is in the strict fragment");

  auto* parse_cmd = app.add_subcommand("parse", "Echo a formula in canonical form");
  parse_cmd->add_option("formula", formula_text, "Formula text")->required();

  auto* classify_cmd = app.add_subcommand("classify", "Print the specification class of a formula");
  classify_cmd->add_option("formula", formula_text, "Formula text")->required();

  auto* monitor = app.add_subcommand("monitor", "Evaluate a formula on a CSV trace (exit 0 true, 1 false, 2 error)");
  monitor->add_option("--formula", formula_text, "Formula text")->required();
  monitor->add_option("--trace", trace_path, "CSV trace")->required();
  monitor->add_option("--at", at, "Sample index to evaluate at");

  auto* exemplar = app.add_subcommand("exemplar", "Write exemplar traces for one template");
  exemplar->add_option("spec", spec_path, "Path to a .vspec.json file")->required();
  exemplar->add_option("--template", node, "Template id")->required();
  exemplar->add_option("-n", count, "Number of traces")->check(CLI::Range(1, 1000));
  exemplar->add_option("--seed", seed, "RNG seed")->required();
  exemplar->add_option("--dt", dt, "Sample period in seconds");
  exemplar->add_option("--duration", duration, "Trace duration in seconds");
  exemplar->add_flag("--negative", negative, "Generate counterexemplars");
  exemplar->add_option("--out", out_dir, "Output directory");

  auto* corpus = app.add_subcommand("corpus", "Run the built-in formula and task corpus");

  auto* serve = app.add_subcommand("serve", "Start the HTTP service");
  serve->add_option("--port", port, "Port (0 = any free port)");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--dir", persist_dir, "Persistence directory");
  serve->add_option("--origin", origins, "Allowed CORS origin (repeatable, * for any)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return cmd_validate(spec_path);
    if (*translate_cmd) return cmd_translate(spec_path, strict);
    if (*parse_cmd) {
      std::cout << format(parse(formula_text)) << "\n";
      return 0;
    }
    if (*classify_cmd) {
      std::cout << class_text(classify(parse(formula_text))) << "\n";
      return 0;
    }
    if (*monitor) {
      const bool result = evaluate(parse(formula_text), load_trace(trace_path), at);
      std::cout << (result ? "true" : "false") << "\n";
      return result ? 0 : 1;
    }
    if (*exemplar) return cmd_exemplar(spec_path, node, count, seed, dt, duration, negative, out_dir);
    if (*corpus) {
      const auto report = run_corpus();
      std::cout << report.text();
      return report.all_passed() ? 0 : 1;
    }
    if (*serve) {
      ServiceConfig config;
      config.host = host;
      config.port = port;
      if (persist_dir) config.persistence_dir = *persist_dir;
      config.allowed_origins = origins;
      Service service(config);
      std::cout << "listening on " << host << ":" << service.bind() << std::endl;
      g_service = &service;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      service.run();
      g_service = nullptr;
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << e.what();
    if (e.line() != 0) std::cerr << " (line " << e.line() << ", column " << e.column() << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
