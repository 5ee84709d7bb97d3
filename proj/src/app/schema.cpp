#include <cmath>
#include <string>

#include "otto/app.hpp"
#include "schema_text.hpp"

namespace otto::app {
namespace {

using nlohmann::json;

std::string escape_token(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~')
      out += "~0";
    else if (c == '/')
      out += "~1";
    else
      out += c;
  }
  return out;
}

bool has_type(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "null") return v.is_null();
  if (type == "number") return v.is_number();
  if (type == "integer") {
    if (v.is_number_integer()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d);
  }
  return false;
}

class Validator {
 public:
  explicit Validator(const json& root) : root_(root) {}

  void check(const json& schema, const json& doc, const std::string& at,
             std::vector<SchemaIssue>& out) const {
    if (schema.contains("$ref")) {
      check(resolve(schema["$ref"].get<std::string>()), doc, at, out);
      return;
    }
    if (schema.contains("oneOf")) {
      int matches = 0;
      for (const auto& alt : schema["oneOf"]) {
        std::vector<SchemaIssue> scratch;
        check(alt, doc, at, scratch);
        if (scratch.empty()) ++matches;
      }
      if (matches != 1) out.push_back({at, matches == 0 ? "matches none of the allowed forms"
                                                        : "matches more than one allowed form"});
    }
    if (schema.contains("type")) {
      const json& t = schema["type"];
      bool ok = false;
      if (t.is_string()) {
        ok = has_type(doc, t.get<std::string>());
      } else {
        for (const auto& alt : t) ok = ok || has_type(doc, alt.get<std::string>());
      }
      if (!ok) {
        out.push_back({at, "expected type " + t.dump() + ", got " + doc.type_name()});
        return;
      }
    }
    if (schema.contains("enum")) {
      bool found = false;
      for (const auto& e : schema["enum"]) found = found || e == doc;
      if (!found) out.push_back({at, "value " + doc.dump() + " not in " + schema["enum"].dump()});
    }
    if (doc.is_number()) check_number(schema, doc.get<double>(), at, out);
    if (doc.is_object()) check_object(schema, doc, at, out);
    if (doc.is_array()) check_array(schema, doc, at, out);
  }

 private:
  const json& resolve(const std::string& ref) const {
    if (ref.rfind("#", 0) != 0) throw std::logic_error("only local $ref supported: " + ref);
    return root_.at(json::json_pointer(ref.substr(1)));
  }

  static void check_number(const json& schema, double v, const std::string& at,
                           std::vector<SchemaIssue>& out) {
    if (!std::isfinite(v)) out.push_back({at, "number must be finite"});
    auto bound = [&](const char* key, auto ok, const char* text) {
      if (!schema.contains(key)) return;
      const double b = schema[key].get<double>();
      if (!ok(v, b)) out.push_back({at, std::string("must be ") + text + " " + schema[key].dump()});
    };
    bound("minimum", [](double a, double b) { return a >= b; }, ">=");
    bound("maximum", [](double a, double b) { return a <= b; }, "<=");
    bound("exclusiveMinimum", [](double a, double b) { return a > b; }, ">");
    bound("exclusiveMaximum", [](double a, double b) { return a < b; }, "<");
  }

  void check_object(const json& schema, const json& doc, const std::string& at,
                    std::vector<SchemaIssue>& out) const {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        if (!doc.contains(key.get<std::string>()))
          out.push_back({at, "missing required property \"" + key.get<std::string>() + "\""});
      }
    }
    const json* props = schema.contains("properties") ? &schema["properties"] : nullptr;
    const bool closed =
        schema.contains("additionalProperties") && schema["additionalProperties"] == false;
    for (auto it = doc.begin(); it != doc.end(); ++it) {
      const std::string child = at + "/" + escape_token(it.key());
      if (props && props->contains(it.key())) {
        check((*props)[it.key()], it.value(), child, out);
      } else if (closed) {
        out.push_back({child, "unknown property"});
      }
    }
  }

  void check_array(const json& schema, const json& doc, const std::string& at,
                   std::vector<SchemaIssue>& out) const {
    if (schema.contains("minItems") && doc.size() < schema["minItems"].get<std::size_t>())
      out.push_back({at, "needs at least " + schema["minItems"].dump() + " items"});
    if (schema.contains("items")) {
      for (std::size_t i = 0; i < doc.size(); ++i)
        check(schema["items"], doc[i], at + "/" + std::to_string(i), out);
    }
  }

  const json& root_;
};

}  // namespace

const nlohmann::json& config_schema() {
  static const nlohmann::json schema = nlohmann::json::parse(detail::kSchemaText);
  return schema;
}

std::vector<SchemaIssue> validate_schema(const nlohmann::json& schema, const nlohmann::json& doc) {
  std::vector<SchemaIssue> issues;
  Validator(schema).check(schema, doc, "", issues);
  return issues;
}

}  // namespace otto::app
