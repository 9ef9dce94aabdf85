#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlfi/perturb.hpp"
#include "nlfi/problem.hpp"

namespace nlfi {

using json = nlohmann::ordered_json;

/// Problem-file error; the message starts with the JSON path of the offending field.
class DocumentError : public std::runtime_error {
 public:
  DocumentError(const std::string& path, const std::string& msg)
      : std::runtime_error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Parsed problem file, schema_version 1.
struct ProblemDocument {
  int schema_version = 1;
  ProblemSpec spec;
  std::optional<Interval> eps_domain;
  double eps = 0.0;                 // instance used by solve/certify/attractor
  std::optional<std::size_t> grid;  // grid intervals
  std::optional<double> tol;
  json source;

  FractalProblem instantiate() const { return FractalProblem(spec, eps); }
  ProblemFamily family() const;
};

ProblemDocument parse_document(const json& j);
ProblemDocument parse_document_text(const std::string& text, const std::string& origin = "<text>");
ProblemDocument load_document(const std::filesystem::path& file);

struct BuiltinExample {
  std::string name;
  std::string description;
  std::string figure;  // figure-data file written by `examples run`, empty if none
  json document;
};

const std::vector<BuiltinExample>& builtin_examples();
/// Throws std::out_of_range for unknown names.
const BuiltinExample& builtin_example(const std::string& name);

}  // namespace nlfi
