#pragma once

#include "mlab/funcspec.hpp"

#include <string>

namespace mlab::detail {

class Node {
 public:
  explicit Node(Domain d) : domain(d) {}
  virtual ~Node() = default;
  // k-th derivative at z; callers guarantee k <= order().
  virtual cplx eval(cplx z, int k) const = 0;
  virtual int order() const = 0;
  virtual void prefix(std::string& out) const = 0;
  // Display form with the argument rendered as `arg`.
  virtual void infix(std::string& out, const std::string& arg) const = 0;
  virtual bool parsed() const = 0;

  Domain domain;
};

using NodePtr = std::shared_ptr<const Node>;

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class CallFn { Exp, Sin, Cos, Log, Abs, Pow, Bump };

NodePtr make_number(cplx v);
NodePtr make_variable(Domain d);
NodePtr make_constant(cplx v);
NodePtr make_identity(Domain d);
NodePtr make_f_alpha(double alpha, double t);
NodePtr make_power(cplx z);
NodePtr make_modulation(double omega);
NodePtr make_gaussian(double width);
NodePtr make_bump(double center, double radius, double sharpness);
NodePtr make_negate(NodePtr a);
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b);
NodePtr make_call(CallFn fn, std::vector<NodePtr> args);
NodePtr make_dilate(double s, NodePtr f);
NodePtr make_exp_substitute(NodePtr f);
NodePtr make_derivative(int k, NodePtr f);
NodePtr make_fd_derivative(int k, NodePtr f);

Domain intersect(Domain a, Domain b);
std::string format_real(double v);
std::string format_number_infix(cplx v);
std::string format_number_prefix(cplx v);
const char* call_name(CallFn fn);
std::size_t call_arity(CallFn fn);

}  // namespace mlab::detail
