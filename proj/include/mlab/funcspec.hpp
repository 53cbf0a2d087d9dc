#pragma once

#include "mlab/core.hpp"

#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mlab {

// Where a function is declared. Points off the domain raise DomainError.
enum class Domain { RealLine, NonNegative, Positive };

std::string to_string(Domain d);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

inline constexpr int kAllOrders = std::numeric_limits<int>::max();

namespace detail {
class Node;
}

// Immutable scalar function of one variable. Copies share the node tree.
class FuncExpr {
 public:
  enum class Kind { Builtin, Parsed };

  // Built-ins with closed-form derivatives of every order.
  static FuncExpr constant(cplx c);
  static FuncExpr identity(Domain domain = Domain::RealLine);
  static FuncExpr f_alpha(double alpha, double t);          // (1+x)^(-alpha) e^{itx}, x >= 0
  static FuncExpr power(cplx z);                            // x^z, x > 0
  static FuncExpr modulation(double omega);                 // e^{i omega x}
  static FuncExpr gaussian(double width);                   // exp(-(x/width)^2)
  static FuncExpr bump(double center = 0.0, double radius = 1.0, double sharpness = 1.0);

  cplx operator()(cplx z) const;
  cplx operator()(double x) const { return (*this)(cplx(x, 0.0)); }

  Kind kind() const;
  Domain domain() const;
  int derivative_order_available() const;

  // k-th derivative. Without allow_finite_differences the order must be
  // available in closed form.
  FuncExpr derivative(int k, bool allow_finite_differences = false) const;

  // x -> f(s x), s > 0.
  FuncExpr dilate(double s) const;
  // x -> f(e^x) on the real line.
  FuncExpr exp_substitute() const;
  FuncExpr operator*(const FuncExpr& g) const;
  FuncExpr operator+(const FuncExpr& g) const;
  FuncExpr operator-(const FuncExpr& g) const;
  FuncExpr operator-() const;
  friend FuncExpr operator*(cplx a, const FuncExpr& f);

  std::string to_prefix() const;
  std::string to_infix() const;
  static FuncExpr from_prefix(std::string_view text);

  const detail::Node& node() const { return *node_; }

  explicit FuncExpr(std::shared_ptr<const detail::Node> node);

 private:
  std::shared_ptr<const detail::Node> node_;
};

// Parses an expression in one variable. Supports + - * / ^, parentheses,
// literals such as 2.5, 3i, the constants i and pi, and the functions
// exp sin cos log abs pow bump.
FuncExpr parse(std::string_view text, Domain domain = Domain::RealLine, std::string_view variable = "x");

FuncExpr builtin_f_alpha(double alpha, double t);

struct PointValue {
  cplx point;
  std::optional<cplx> value;
  std::string error;  // set when value is empty
};

std::vector<PointValue> eval(const FuncExpr& f, std::span<const cplx> points);

inline FuncExpr derivative(const FuncExpr& f, int k, bool allow_finite_differences = false) {
  return f.derivative(k, allow_finite_differences);
}

// Step of the central-difference fallback at x for derivative order k.
double finite_difference_step(double x, int k);

}  // namespace mlab
