#include <stdexcept>

#include "nlfi/document.hpp"

namespace nlfi {

namespace {

constexpr const char* kEx21 = R"json({
  "schema_version": 1,
  "name": "ex2_1",
  "description": "Nonlinear two-piece partition of [0,1] with contact point 1/2; q = s = 0",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "(2*x + x^2)/6", "h_inv": "-1 + sqrt(6*x + 1)"},
    {"h": "(1 + sqrt(2)*sin(pi*x/4))/2", "h_inv": "(4/pi)*arcsin((2*x - 1)/sqrt(2))"}
  ],
  "fields": [
    {"q": "0", "s": "0"},
    {"q": "0", "s": "0"}
  ]
})json";

constexpr const char* kEx32 = R"json({
  "schema_version": 1,
  "name": "ex3_2",
  "description": "Bounded fractal function with a discontinuous q_2 = floor(sqrt(10x)); s = 2/3",
  "notes": "Pieces are attributed by the images of the maps: h_1([0,1]) = [0,1/2], so the breakpoint is 1/2 rather than 1/3.",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "(2*x + x^2)/6", "h_inv": "-1 + sqrt(6*x + 1)"},
    {"h": "(1 + sqrt(2)*sin(pi*x/4))/2", "h_inv": "(4/pi)*arcsin((2*x - 1)/sqrt(2))"}
  ],
  "fields": [
    {"q": "-1", "s": "-sin(x)/2"},
    {"q": "floor(sqrt(10*x))", "s": "-2*cos(x)/3"}
  ]
})json";

constexpr const char* kEx34 = R"json({
  "schema_version": 1,
  "name": "ex3_4",
  "description": "Continuous fractal function on the nonlinear partition; q_1 = x, q_2 = 1 - x, s = 1/2",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "(2*x + x^2)/6", "h_inv": "-1 + sqrt(6*x + 1)"},
    {"h": "(1 + sqrt(2)*sin(pi*x/4))/2", "h_inv": "(4/pi)*arcsin((2*x - 1)/sqrt(2))"}
  ],
  "fields": [
    {"q": "x", "s": "0.5"},
    {"q": "1 - x", "s": "0.5"}
  ],
  "grid": 4096,
  "tol": 1e-9
})json";

constexpr const char* kEx35 = R"json({
  "schema_version": 1,
  "name": "ex3_5",
  "description": "Perturbed partition h_i(x, eps), affine (Takagi-type) at eps = 0; q_1 = x, q_2 = 1 - x, s = 1/2",
  "notes": "q_2 = 1 - x keeps the join-up condition at the contact point for every eps. The inverse of h_2 takes the minus branch of the square root.",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "(0.5 - eps)*x + eps*x^2",
     "h_inv": "(-1 + 2*eps + sqrt(1 + 4*(4*x - 1)*eps + 4*eps^2))/(4*eps)"},
    {"h": "0.5 + (0.5 + eps)*x - eps*x^2",
     "h_inv": "(1 + 2*eps - sqrt(1 + 4*(3 - 4*x)*eps + 4*eps^2))/(4*eps)"}
  ],
  "fields": [
    {"q": "x", "s": "0.5"},
    {"q": "1 - x", "s": "0.5"}
  ],
  "eps": 0,
  "eps_domain": [-0.5, 0.5],
  "grid": 4096,
  "tol": 1e-9
})json";

constexpr const char* kEx51 = R"json({
  "schema_version": 1,
  "name": "ex5_1",
  "description": "Differentiable fractal function: C^1 contraction constant 4/5",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "x*(x + 1)/4", "h_inv": "(-1 + sqrt(1 + 16*x))/2"},
    {"h": "(2 + x + x^2)/4", "h_inv": "(-1 + sqrt(16*x - 7))/2"}
  ],
  "fields": [
    {"q": "x", "s": "(1 - x)/5"},
    {"q": "1 + 3*x/13", "s": "x/5"}
  ]
})json";

constexpr const char* kTakagi = R"json({
  "schema_version": 1,
  "name": "takagi",
  "description": "Takagi function: affine partition x/2, (x + 1)/2; q_1 = x, q_2 = 1 - x, s = 1/2",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "x/2", "h_inv": "2*x"},
    {"h": "(x + 1)/2", "h_inv": "2*x - 1"}
  ],
  "fields": [
    {"q": "x", "s": "0.5"},
    {"q": "1 - x", "s": "0.5"}
  ],
  "grid": 4096,
  "tol": 1e-9
})json";

constexpr const char* kZero = R"json({
  "schema_version": 1,
  "name": "zero",
  "description": "q = 0 on the Takagi partition: the fixed point is identically zero",
  "domain": [0, 1],
  "codomain": "scalar",
  "variant": "affine",
  "maps": [
    {"h": "x/2", "h_inv": "2*x"},
    {"h": "(x + 1)/2", "h_inv": "2*x - 1"}
  ],
  "fields": [
    {"q": "0", "s": "0.5"},
    {"q": "0", "s": "0.5"}
  ]
})json";

std::vector<BuiltinExample> make_registry() {
  return {
      {"ex2_1", "nonlinear partition with contact point 1/2", "partition.csv", json::parse(kEx21)},
      {"ex3_2", "bounded fractal function (floor field, s = 2/3)", "figure1.csv",
       json::parse(kEx32)},
      {"ex3_4", "continuous fractal function on the nonlinear partition", "figure2_upper.csv",
       json::parse(kEx34)},
      {"ex3_5", "perturbed partition family, eps in [-1/2, 1/2]", "figure3.csv",
       json::parse(kEx35)},
      {"ex5_1", "differentiable fractal function (C^1 constant 4/5)", "figure4.csv",
       json::parse(kEx51)},
      {"takagi", "Takagi function", "figure2_lower.csv", json::parse(kTakagi)},
      {"zero", "zero fixed point (q = 0)", "", json::parse(kZero)},
  };
}

}  // namespace

const std::vector<BuiltinExample>& builtin_examples() {
  static const std::vector<BuiltinExample> registry = make_registry();
  return registry;
}

const BuiltinExample& builtin_example(const std::string& name) {
  for (const auto& e : builtin_examples()) {
    if (e.name == name) return e;
  }
  std::string known;
  for (const auto& e : builtin_examples()) known += (known.empty() ? "" : ", ") + e.name;
  throw std::out_of_range("unknown example '" + name + "' (known: " + known + ")");
}

}  // namespace nlfi
