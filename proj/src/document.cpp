#include "nlfi/document.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace nlfi {

namespace {

std::string idx(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json& require(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw DocumentError(path + "." + key, "required field is missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw DocumentError(path, "expected a number");
  return j.get<double>();
}

Interval interval(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw DocumentError(path, "expected [lo, hi]");
  Interval iv{number(j[0], idx(path, 0)), number(j[1], idx(path, 1))};
  if (!(iv.lo < iv.hi)) throw DocumentError(path, "expected lo < hi");
  return iv;
}

Expression expression(const json& j, const std::string& path) {
  if (j.is_number()) return Expression::constant(j.get<double>());
  if (!j.is_string()) throw DocumentError(path, "expected an expression string or a number");
  try {
    return Expression::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    throw DocumentError(path, e.what());
  }
}

// "q"/"s" entry: scalar, list of d components, or d x d matrix literal
std::vector<Expression> components(const json& j, const std::string& path, const Codomain& cod, bool is_s) {
  std::vector<Expression> out;
  if (!j.is_array()) {
    out.push_back(expression(j, path));
    return out;
  }
  const bool matrix = cod.kind == Codomain::Kind::matrix;
  if (matrix || is_s) {
    if (!matrix) throw DocumentError(path, "matrix literal needs a matrix codomain");
    if (j.size() != static_cast<std::size_t>(cod.dim)) {
      throw DocumentError(path, "expected " + std::to_string(cod.dim) + " rows");
    }
    for (std::size_t r = 0; r < j.size(); ++r) {
      const std::string rp = idx(path, r);
      if (!j[r].is_array() || j[r].size() != static_cast<std::size_t>(cod.dim)) {
        throw DocumentError(rp, "expected a row of " + std::to_string(cod.dim) + " entries");
      }
      for (std::size_t c = 0; c < j[r].size(); ++c) out.push_back(expression(j[r][c], idx(rp, c)));
    }
    return out;
  }
  for (std::size_t c = 0; c < j.size(); ++c) out.push_back(expression(j[c], idx(path, c)));
  return out;
}

void reject_unknown(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw DocumentError(path + "." + it.key(), "unknown field");
  }
}

}  // namespace

ProblemFamily ProblemDocument::family() const {
  if (!eps_domain) throw DocumentError("$.eps_domain", "required for parameter sweeps");
  return ProblemFamily(spec, *eps_domain);
}

ProblemDocument parse_document(const json& j) {
  if (!j.is_object()) throw DocumentError("$", "expected a JSON object");
  reject_unknown(j, "$",
                 {"schema_version", "name", "description", "notes", "domain", "codomain", "variant", "maps",
                  "fields", "v", "contraction_c", "eps", "eps_domain", "grid", "tol"});
  ProblemDocument doc;
  doc.source = j;
  const json& ver = require(j, "$", "schema_version");
  if (!ver.is_number_integer() || ver.get<int>() != 1) {
    throw DocumentError("$.schema_version", "unsupported schema version (expected 1)");
  }
  ProblemSpec& spec = doc.spec;
  if (auto it = j.find("name"); it != j.end()) {
    if (!it->is_string()) throw DocumentError("$.name", "expected a string");
    spec.name = it->get<std::string>();
  }
  for (const char* key : {"description", "notes"}) {
    if (auto it = j.find(key); it != j.end() && !it->is_string()) {
      throw DocumentError(std::string("$.") + key, "expected a string");
    }
  }
  spec.domain = interval(require(j, "$", "domain"), "$.domain");
  if (auto it = j.find("codomain"); it != j.end()) {
    if (!it->is_string()) throw DocumentError("$.codomain", "expected a string");
    try {
      spec.codomain = Codomain::parse(it->get<std::string>());
    } catch (const std::exception& e) {
      throw DocumentError("$.codomain", e.what());
    }
  }
  if (auto it = j.find("variant"); it != j.end()) {
    const std::string v = it->is_string() ? it->get<std::string>() : "";
    if (v == "affine") spec.variant = Variant::affine;
    else if (v == "general") spec.variant = Variant::general;
    else throw DocumentError("$.variant", "expected \"affine\" or \"general\"");
  }

  const json& maps = require(j, "$", "maps");
  if (!maps.is_array() || maps.empty()) throw DocumentError("$.maps", "expected a non-empty array");
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const std::string p = idx("$.maps", i);
    if (!maps[i].is_object()) throw DocumentError(p, "expected an object");
    reject_unknown(maps[i], p, {"h", "h_inv"});
    MapSpec m{expression(require(maps[i], p, "h"), p + ".h"), std::nullopt};
    if (auto it = maps[i].find("h_inv"); it != maps[i].end() && !it->is_null()) {
      m.h_inv = expression(*it, p + ".h_inv");
    }
    spec.maps.push_back(std::move(m));
  }

  if (spec.variant == Variant::affine) {
    if (j.contains("v")) throw DocumentError("$.v", "only allowed for the general variant");
    const json& fields = require(j, "$", "fields");
    if (!fields.is_array()) throw DocumentError("$.fields", "expected an array");
    if (fields.size() != maps.size()) {
      throw DocumentError("$.fields", "expected " + std::to_string(maps.size()) + " entries, one per map");
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const std::string p = idx("$.fields", i);
      if (!fields[i].is_object()) throw DocumentError(p, "expected an object");
      reject_unknown(fields[i], p, {"q", "s"});
      FieldSpec f;
      f.q = components(require(fields[i], p, "q"), p + ".q", spec.codomain, false);
      f.s = components(require(fields[i], p, "s"), p + ".s", spec.codomain, true);
      if (f.q.size() != spec.codomain.components()) {
        throw DocumentError(p + ".q", "expected " + std::to_string(spec.codomain.components()) +
                                          " components for codomain " + spec.codomain.to_string());
      }
      spec.fields.push_back(std::move(f));
    }
  } else {
    if (j.contains("fields")) throw DocumentError("$.fields", "not allowed for the general variant (use v)");
    const json& v = require(j, "$", "v");
    if (!v.is_array() || v.size() != maps.size()) {
      throw DocumentError("$.v", "expected " + std::to_string(maps.size()) + " expressions, one per map");
    }
    for (std::size_t i = 0; i < v.size(); ++i) spec.v.push_back(expression(v[i], idx("$.v", i)));
    spec.contraction_c = number(require(j, "$", "contraction_c"), "$.contraction_c");
  }
  if (spec.variant == Variant::affine && j.contains("contraction_c")) {
    throw DocumentError("$.contraction_c", "only allowed for the general variant");
  }

  if (auto it = j.find("eps_domain"); it != j.end()) doc.eps_domain = interval(*it, "$.eps_domain");
  if (auto it = j.find("eps"); it != j.end()) {
    doc.eps = number(*it, "$.eps");
    if (doc.eps_domain && !doc.eps_domain->contains(doc.eps)) {
      throw DocumentError("$.eps", "outside eps_domain");
    }
  }
  if (auto it = j.find("grid"); it != j.end()) {
    if (!it->is_number_integer() || it->get<long long>() < 2) {
      throw DocumentError("$.grid", "expected an integer >= 2");
    }
    doc.grid = it->get<std::size_t>();
  }
  if (auto it = j.find("tol"); it != j.end()) {
    doc.tol = number(*it, "$.tol");
    if (!(*doc.tol > 0.0)) throw DocumentError("$.tol", "expected a positive number");
  }
  return doc;
}

ProblemDocument parse_document_text(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DocumentError("$", origin + ": invalid JSON: " + e.what());
  }
  return parse_document(j);
}

ProblemDocument load_document(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + file.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_document_text(ss.str(), file.string());
}

}  // namespace nlfi
