#pragma once

#include <functional>
#include <memory>
#include <string>

#include "homog/types.hpp"

namespace homog {

/// Arguments available to a scalar coefficient expression.
struct ExprArgs {
  const Vector* y1 = nullptr;
  const Vector* y2 = nullptr;
  double s1 = 0.0;
  double s2 = 0.0;
};

/// A compiled scalar expression over {y1[i], y2[i], s1, s2, sin, cos, pi,
/// +, -, *, /, constants}. Grammar is documented in docs/config.schema.json.
class Expression {
public:
  /// Parse `source`; `dimension` bounds the y1[i]/y2[i] component indices.
  /// Throws ValidationError on a syntax error or out-of-range index.
  static Expression parse(const std::string& source, int dimension);

  double operator()(const ExprArgs& args) const { return eval_(args); }
  const std::string& source() const { return source_; }

private:
  std::function<double(const ExprArgs&)> eval_;
  std::string source_;
};

} // namespace homog
