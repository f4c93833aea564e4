#pragma once

#include <functional>
#include <optional>
#include <utility>

#include <Eigen/Core>

#include "homsphere/group.hpp"

namespace homsphere {

/// A field on SU(2) given by its coefficients against an orthonormal
/// left-invariant frame. `Tag` separates vector fields from one-forms.
/// Left-invariant fields carry their constant coefficients so callers can take
/// exact shortcuts (all frame derivatives vanish).
template <class Tag>
class CoefficientField {
 public:
  using Evaluator = std::function<Eigen::Vector3d(const GroupPoint&)>;

  CoefficientField() : CoefficientField(constant(Eigen::Vector3d::Zero())) {}

  static CoefficientField constant(const Eigen::Vector3d& c) {
    CoefficientField f = blank();
    f.eval_ = [c](const GroupPoint&) { return c; };
    f.constant_ = c;
    return f;
  }
  static CoefficientField general(Evaluator eval) {
    CoefficientField f = blank();
    f.eval_ = std::move(eval);
    return f;
  }

  Eigen::Vector3d operator()(const GroupPoint& g) const { return eval_(g); }
  bool is_left_invariant() const { return constant_.has_value(); }
  const std::optional<Eigen::Vector3d>& constant_coefficients() const { return constant_; }

 private:
  struct Uninit {};
  explicit CoefficientField(Uninit) {}
  static CoefficientField blank() { return CoefficientField(Uninit{}); }

  Evaluator eval_;
  std::optional<Eigen::Vector3d> constant_;
};

struct VectorFieldTag;
struct OneFormTag;

using FrameField = CoefficientField<VectorFieldTag>;
using OneFormField = CoefficientField<OneFormTag>;

/// Scalar function on the group.
using ScalarField = std::function<double(const GroupPoint&)>;

}  // namespace homsphere
