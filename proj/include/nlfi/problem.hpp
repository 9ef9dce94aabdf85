#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlfi/expr.hpp"
#include "nlfi/funcrep.hpp"
#include "nlfi/partition.hpp"

namespace nlfi {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Variant { affine, general };

struct MapSpec {
  Expression h;
  std::optional<Expression> h_inv;
};

/// q_i has one expression per codomain component; s_i is a single scalar
/// expression, or d*d row-major entries for a matrix codomain.
struct FieldSpec {
  std::vector<Expression> q;
  std::vector<Expression> s;
};

/// Unbound problem description; expressions may reference `eps`.
struct ProblemSpec {
  std::string name;
  Interval domain{0.0, 1.0};
  Codomain codomain = Codomain::scalar();
  Variant variant = Variant::affine;
  std::vector<MapSpec> maps;
  std::vector<FieldSpec> fields;
  std::vector<Expression> v;             // general variant: v_i(x, y), scalar codomain
  std::optional<double> contraction_c;   // general variant: declared y-contraction factor
};

/// A fully bound RB problem: maps h_i, fields q_i and s_i (or v_i) at a fixed eps.
/// Immutable after construction.
class FractalProblem {
 public:
  explicit FractalProblem(const ProblemSpec& spec, double eps = 0.0);

  const std::string& name() const { return name_; }
  std::size_t size() const { return maps_.size(); }
  Interval domain() const { return domain_; }
  const Codomain& codomain() const { return codomain_; }
  Variant variant() const { return variant_; }
  double eps() const { return eps_; }

  const std::vector<PartitionMap>& maps() const { return maps_; }
  const PartitionMap& map(std::size_t i) const { return maps_.at(i); }
  const PartitionReport& partition() const { return partition_; }
  std::size_t locate(double x) const { return locator_.locate(x); }

  const FieldSpec& field(std::size_t i) const { return fields_.at(i); }
  const Expression& v(std::size_t i) const { return v_.at(i); }
  bool s_is_matrix(std::size_t i) const { return fields_.at(i).s.size() > 1; }

  void q(std::size_t i, double y, std::span<double> out) const;
  void s(std::size_t i, double y, std::span<double> out) const;
  /// Operator norm of s_i(y): |s| for scalars, spectral norm for matrices.
  double s_norm(std::size_t i, double y) const;

  /// q_i(y) + s_i(y) . f  (affine) or v_i(y, f) (general).
  void apply_piece(std::size_t i, double y, std::span<const double> fy, std::span<double> out) const;

  /// True when some q_i or s_i contains floor (bounded-space problem).
  bool has_discontinuous_fields() const;
  bool fields_differentiable() const;

  std::optional<double> declared_contraction() const { return declared_c_; }
  /// Sampled max |v_i(x,y1) - v_i(x,y2)| / |y1 - y2| (general variant only).
  double sampled_contraction() const { return sampled_c_; }
  /// max_i sup_x |v_i(x, 0)| (general variant only).
  double v_zero_bound() const { return v_zero_bound_; }

 private:
  std::string name_;
  Interval domain_;
  Codomain codomain_;
  Variant variant_;
  double eps_;
  std::vector<PartitionMap> maps_;
  PartitionReport partition_;
  PieceLocator locator_;
  std::vector<FieldSpec> fields_;
  std::vector<Expression> v_;
  std::optional<double> declared_c_;
  double sampled_c_ = 0.0;
  double v_zero_bound_ = 0.0;
};

}  // namespace nlfi
