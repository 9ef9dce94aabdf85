#pragma once

#include <string>

#include "nlfi/document.hpp"
#include "nlfi/problem.hpp"

namespace nlfi::test {

inline ProblemDocument builtin_doc(const std::string& name) {
  return parse_document(builtin_example(name).document);
}

inline FractalProblem builtin_problem(const std::string& name, double eps = 0.0) {
  return FractalProblem(builtin_doc(name).spec, eps);
}

inline FractalProblem problem_from(const std::string& json_text, double eps = 0.0) {
  return FractalProblem(parse_document_text(json_text).spec, eps);
}

// Two-map affine problem on the Takagi partition with the given field strings.
inline std::string takagi_like(const std::string& q1, const std::string& s1, const std::string& q2,
                               const std::string& s2) {
  return R"({"schema_version": 1, "domain": [0, 1], "codomain": "scalar",
    "maps": [{"h": "x/2", "h_inv": "2*x"}, {"h": "(x + 1)/2", "h_inv": "2*x - 1"}],
    "fields": [{"q": ")" + q1 + R"(", "s": ")" + s1 + R"("}, {"q": ")" + q2 + R"(", "s": ")" + s2 + R"("}]})";
}

}  // namespace nlfi::test
