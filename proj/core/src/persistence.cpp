#include "mtlspec/persistence.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mtlspec/mtl.hpp"

namespace mtlspec {

using nlohmann::json;

// ---------------------------------------------------------------------------
// spec documents

namespace {

json interval_json(const Interval& window) { return json::array({window.lo, window.hi}); }

void node_json(const TemplateNode& node, const std::optional<NodeId>& parent, std::size_t order,
               json& out) {
  json j = json::object();
  j["id"] = node.id;
  if (parent) j["parent"] = *parent;
  j["order"] = order;
  j["group"] = node.group;
  json op = json::object();
  op["kind"] = std::string(to_string(node.op.kind));
  if (node.op.outer) op["outer"] = interval_json(*node.op.outer);
  if (node.op.inner) op["inner"] = interval_json(*node.op.inner);
  j["op"] = std::move(op);
  if (node.predicate) {
    j["predicate"] = {{"signal", node.predicate->signal},
                      {"relation", std::string(to_string(node.predicate->relation))},
                      {"threshold", node.predicate->threshold}};
  }
  out.push_back(std::move(j));
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    node_json(node.children[i], node.id, i, out);
  }
}

[[noreturn]] void schema_error(const std::string& field, const std::string& reason) {
  throw Error(ErrorCode::SchemaError, field + ": " + reason);
}

void only_fields(const json& object, const std::string& where,
                 std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : object.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      schema_error(where + "." + key, "unknown field");
    }
  }
}

const json& require(const json& object, const std::string& where, const char* key) {
  auto it = object.find(key);
  if (it == object.end()) schema_error(where + "." + key, "missing");
  return *it;
}

std::string string_field(const json& object, const std::string& where, const char* key) {
  const auto& v = require(object, where, key);
  if (!v.is_string()) schema_error(where + "." + key, "expected a string");
  return v.get<std::string>();
}

double number_value(const json& v, const std::string& where) {
  if (!v.is_number()) schema_error(where, "expected a number");
  return v.get<double>();
}

long long integer_field(const json& object, const std::string& where, const char* key) {
  const auto& v = require(object, where, key);
  if (!v.is_number_integer()) schema_error(where + "." + key, "expected an integer");
  return v.get<long long>();
}

Interval interval_value(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) schema_error(where, "expected [lo, hi]");
  Interval window{number_value(v[0], where + "[0]"), number_value(v[1], where + "[1]")};
  if (!window.valid()) schema_error(where, "interval must satisfy 0 <= lo <= hi");
  return window;
}

struct FlatNode {
  TemplateNode node;
  std::optional<NodeId> parent;
  long long order = 0;
};

FlatNode parse_node(const json& j, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  only_fields(j, where, {"id", "parent", "order", "group", "op", "predicate"});
  FlatNode flat;
  flat.node.id = string_field(j, where, "id");
  if (flat.node.id.empty()) schema_error(where + ".id", "must not be empty");
  if (j.contains("parent")) flat.parent = string_field(j, where, "parent");
  flat.order = integer_field(j, where, "order");
  const long long group = integer_field(j, where, "group");
  if (group <= 0 || group > std::numeric_limits<int>::max()) {
    schema_error(where + ".group", "must be a positive integer");
  }
  flat.node.group = static_cast<int>(group);

  const auto& op = require(j, where, "op");
  const std::string op_where = where + ".op";
  if (!op.is_object()) schema_error(op_where, "expected an object");
  only_fields(op, op_where, {"kind", "outer", "inner"});
  const auto kind = operator_kind_from_string(string_field(op, op_where, "kind"));
  if (!kind) schema_error(op_where + ".kind", "unknown operator kind");
  flat.node.op.kind = *kind;
  if (op.contains("outer")) flat.node.op.outer = interval_value(op["outer"], op_where + ".outer");
  if (op.contains("inner")) flat.node.op.inner = interval_value(op["inner"], op_where + ".inner");
  if (!flat.node.op.well_formed()) {
    schema_error(op_where, std::string(to_string(*kind)) + " takes " +
                               std::to_string(interval_arity(*kind)) + " interval(s)");
  }

  if (j.contains("predicate")) {
    const auto& p = j["predicate"];
    const std::string p_where = where + ".predicate";
    if (!p.is_object()) schema_error(p_where, "expected an object");
    only_fields(p, p_where, {"signal", "relation", "threshold"});
    Predicate predicate;
    predicate.signal = string_field(p, p_where, "signal");
    if (!is_valid_signal_name(predicate.signal)) schema_error(p_where + ".signal", "invalid name");
    const auto rel = relation_from_string(string_field(p, p_where, "relation"));
    if (!rel) schema_error(p_where + ".relation", "expected one of <, >, <=, >=");
    predicate.relation = *rel;
    predicate.threshold = number_value(require(p, p_where, "threshold"), p_where + ".threshold");
    flat.node.predicate = std::move(predicate);
  }
  return flat;
}

}  // namespace

std::string spec_to_json(const SpecTree& tree) {
  json doc = json::object();
  doc["version"] = kSpecFormatVersion;
  doc["name"] = tree.name();
  if (!tree.description().empty()) doc["description"] = tree.description();
  doc["negated"] = tree.negated();
  json nodes = json::array();
  for (std::size_t i = 0; i < tree.roots().size(); ++i) {
    node_json(tree.roots()[i], std::nullopt, i, nodes);
  }
  doc["nodes"] = std::move(nodes);
  return doc.dump(2) + "\n";
}

SpecTree spec_from_json(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    schema_error("document", std::string("malformed JSON (") + e.what() + ")");
  }
  if (!doc.is_object()) schema_error("document", "expected an object");
  const auto& version = require(doc, "document", "version");
  if (!version.is_number_integer()) schema_error("document.version", "expected an integer");
  if (version.get<long long>() != kSpecFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "document version " + version.dump() + " is not supported (expected " +
                    std::to_string(kSpecFormatVersion) + ")");
  }
  only_fields(doc, "document", {"version", "name", "description", "negated", "nodes"});
  const std::string name = string_field(doc, "document", "name");
  std::string description;
  if (doc.contains("description")) description = string_field(doc, "document", "description");
  const auto& negated = require(doc, "document", "negated");
  if (!negated.is_boolean()) schema_error("document.negated", "expected a boolean");
  const auto& nodes = require(doc, "document", "nodes");
  if (!nodes.is_array()) schema_error("document.nodes", "expected an array");

  std::vector<FlatNode> flat;
  std::map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    flat.push_back(parse_node(nodes[i], "nodes[" + std::to_string(i) + "]"));
    if (!index.emplace(flat.back().node.id, i).second) {
      schema_error("nodes[" + std::to_string(i) + "].id", "duplicate id '" + flat.back().node.id + "'");
    }
  }
  // children per parent ("" = root), ordered by `order`
  std::map<NodeId, std::vector<std::size_t>> children;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    const auto& parent = flat[i].parent;
    if (parent && index.count(*parent) == 0) {
      schema_error("nodes[" + std::to_string(i) + "].parent", "unknown node '" + *parent + "'");
    }
    children[parent.value_or("")].push_back(i);
  }
  for (auto& [parent, list] : children) {
    std::sort(list.begin(), list.end(),
              [&](std::size_t a, std::size_t b) { return flat[a].order < flat[b].order; });
    for (std::size_t k = 1; k < list.size(); ++k) {
      if (flat[list[k]].order == flat[list[k - 1]].order) {
        schema_error("nodes[" + std::to_string(list[k]) + "].order",
                     "duplicate order among siblings");
      }
    }
  }
  std::size_t attached = 0;
  std::function<TemplateNode(std::size_t)> assemble = [&](std::size_t i) {
    ++attached;
    TemplateNode node = flat[i].node;
    for (auto c : children[node.id]) node.children.push_back(assemble(c));
    return node;
  };
  std::vector<TemplateNode> roots;
  for (auto i : children[""]) roots.push_back(assemble(i));
  if (attached != flat.size()) schema_error("document.nodes", "parent links form a cycle");

  SpecTree tree(name, negated.get<bool>(), std::move(roots));
  tree.set_description(std::move(description));
  return tree;
}

std::string read_file(const std::filesystem::path& source) {
  std::ifstream in(source, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + source.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::size_t write_file(const std::filesystem::path& destination, std::string_view contents) {
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + destination.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to '" + destination.string() + "'");
  return contents.size();
}

std::size_t save_spec(const SpecTree& tree, const std::filesystem::path& destination) {
  return write_file(destination, spec_to_json(tree));
}

SpecTree load_spec(const std::filesystem::path& source) {
  return spec_from_json(read_file(source));
}

// ---------------------------------------------------------------------------
// traces

std::string trace_to_csv(const Trace& trace) {
  std::string out = "time";
  for (const auto& [name, values] : trace.signals()) out += "," + name;
  out += '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out += format_number(trace.times()[k]);
    for (const auto& [name, values] : trace.signals()) out += "," + format_number(values[k]);
    out += '\n';
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) return fields;
    start = comma + 1;
  }
}

[[noreturn]] void csv_error(std::size_t line, std::size_t column, const std::string& reason) {
  throw Error(ErrorCode::CsvError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + reason,
              line, column);
}

}  // namespace

Trace trace_from_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    lines.push_back(text.substr(start, nl == std::string_view::npos ? nl : nl - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) csv_error(1, 1, "empty file");

  const auto header = split_fields(lines[0]);
  if (header[0] != "time") csv_error(1, 1, "first column must be 'time'");
  std::vector<Trace::Column> columns;
  std::set<std::string_view> seen;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (!is_valid_signal_name(header[c])) {
      csv_error(1, c + 1, "'" + std::string(header[c]) + "' is not a valid signal name");
    }
    if (!seen.insert(header[c]).second) {
      csv_error(1, c + 1, "duplicate column '" + std::string(header[c]) + "'");
    }
    columns.emplace_back(std::string(header[c]), std::vector<double>{});
  }
  if (lines.size() < 2) csv_error(2, 1, "trace has no samples");

  std::vector<double> times;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    const std::size_t line_no = r + 1;
    const auto fields = split_fields(lines[r]);
    if (fields.size() != header.size()) {
      csv_error(line_no, std::min(fields.size(), header.size()) + 1,
                "expected " + std::to_string(header.size()) + " fields, found " +
                    std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double value = 0.0;
      const auto field = fields[c];
      auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size() ||
          !std::isfinite(value)) {
        csv_error(line_no, c + 1, "'" + std::string(field) + "' is not a finite number");
      }
      if (c == 0) {
        if (times.empty() && value != 0.0) csv_error(line_no, 1, "first time stamp must be 0");
        if (!times.empty() && !(value > times.back())) {
          throw Error(ErrorCode::NonMonotoneTime,
                      "line " + std::to_string(line_no) + ": time " + std::string(field) +
                          " does not increase past " + format_number(times.back()),
                      line_no, 1);
        }
        times.push_back(value);
      } else {
        columns[c - 1].second.push_back(value);
      }
    }
  }
  return Trace(std::move(times), std::move(columns));
}

std::size_t save_trace(const Trace& trace, const std::filesystem::path& destination) {
  return write_file(destination, trace_to_csv(trace));
}

Trace load_trace(const std::filesystem::path& source) {
  return trace_from_csv(read_file(source));
}

}  // namespace mtlspec
