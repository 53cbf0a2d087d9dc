#include "mlab/funcspec.hpp"

#include "funcspec_nodes.hpp"

#include <cmath>
#include <cstdio>

namespace mlab {

namespace detail {

namespace {

bool is_real(cplx z) { return z.imag() == 0.0; }

cplx falling(cplx a, int j) {
  cplx r = 1.0;
  for (int m = 0; m < j; ++m) r *= a - static_cast<double>(m);
  return r;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

// Stirling numbers of the second kind S(k, j), j = 0..k.
std::vector<double> stirling_row(int k) {
  std::vector<double> row{1.0};
  for (int n = 1; n <= k; ++n) {
    std::vector<double> next(n + 1, 0.0);
    for (int j = 1; j <= n; ++j) next[j] = (j < n ? j * row[j] : 0.0) + row[j - 1];
    row = std::move(next);
  }
  return row;
}

cplx int_power(cplx a, long n) {
  if (n < 0) {
    if (a == cplx(0.0)) throw DomainError("negative power of zero");
    return 1.0 / int_power(a, -n);
  }
  cplx r = 1.0;
  while (n) {
    if (n & 1) r *= a;
    a *= a;
    n >>= 1;
  }
  return r;
}

cplx pow_value(cplx a, cplx b) {
  if (is_real(b) && std::abs(b.real()) <= 64 && b.real() == std::round(b.real()))
    return int_power(a, static_cast<long>(b.real()));
  if (a == cplx(0.0)) {
    if (b.real() > 0) return 0.0;
    throw DomainError("power of zero with non-positive exponent");
  }
  if (is_real(a) && a.real() > 0 && is_real(b)) return std::pow(a.real(), b.real());
  return std::exp(b * std::log(a));
}

// Derivative of the standard bump exp(-a/(1-u^2)) at real u.
double bump_derivative(double u, int k, double a) {
  if (!(std::abs(u) < 1.0)) return 0.0;
  // Q_{k+1} = Q_k' (1-u^2)^2 + 4k u Q_k (1-u^2) - 2a u Q_k, with
  // b^(k) = Q_k (1-u^2)^(-2k) b.
  std::vector<double> q{1.0};
  for (int m = 0; m < k; ++m) {
    std::vector<double> next(q.size() + 4, 0.0);
    for (std::size_t j = 1; j < q.size(); ++j) {
      const double c = j * q[j];  // coefficient of u^{j-1} in Q'
      next[j - 1] += c;
      next[j + 1] -= 2 * c;
      next[j + 3] += c;
    }
    for (std::size_t j = 0; j < q.size(); ++j) {
      next[j + 1] += 4.0 * m * q[j] - 2.0 * a * q[j];
      next[j + 3] -= 4.0 * m * q[j];
    }
    q = std::move(next);
  }
  double poly = 0.0;
  for (std::size_t j = q.size(); j-- > 0;) poly = poly * u + q[j];
  const double w = (1.0 - u) * (1.0 + u);
  return poly * std::exp(-a / w - 2.0 * k * std::log(w));
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

class NumberNode final : public Node {
 public:
  NumberNode(cplx v, bool parsed) : Node(Domain::RealLine), v_(v), parsed_(parsed) {}
  cplx eval(cplx, int k) const override { return k == 0 ? v_ : cplx(0.0); }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override {
    out += parsed_ ? format_number_prefix(v_) : "(const " + format_real(v_.real()) + " " + format_real(v_.imag()) + ")";
  }
  void infix(std::string& out, const std::string&) const override { out += format_number_infix(v_); }
  bool parsed() const override { return parsed_; }

 private:
  cplx v_;
  bool parsed_;
};

class VariableNode final : public Node {
 public:
  VariableNode(Domain d, bool parsed) : Node(d), parsed_(parsed) {}
  cplx eval(cplx z, int k) const override { return k == 0 ? z : (k == 1 ? cplx(1.0) : cplx(0.0)); }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override {
    if (!parsed_) {
      out += "(id " + to_string(domain) + ")";
    } else if (domain == Domain::RealLine) {
      out += "x";
    } else {
      out += "(x " + to_string(domain) + ")";
    }
  }
  void infix(std::string& out, const std::string& arg) const override { out += arg; }
  bool parsed() const override { return parsed_; }

 private:
  bool parsed_;
};

class FAlphaNode final : public Node {
 public:
  FAlphaNode(double alpha, double t) : Node(Domain::NonNegative), alpha_(alpha), t_(t) {}
  cplx eval(cplx z, int k) const override {
    const cplx it(0.0, t_);
    const cplx carrier = std::exp(it * z);
    cplx sum = 0.0;
    for (int j = 0; j <= k; ++j) {
      const double e = -alpha_ - j;
      const cplx base = is_real(z) && z.real() > -1.0 ? cplx(std::pow(1.0 + z.real(), e)) : std::pow(1.0 + z, e);
      sum += binomial(k, j) * falling(-alpha_, j) * base * int_power(it, k - j);
    }
    return sum * carrier;
  }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override {
    out += "(falpha " + format_real(alpha_) + " " + format_real(t_) + ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += "((1+" + arg + ")^(" + format_real(-alpha_) + ")*exp(i*(" + format_real(t_) + ")*" + arg + "))";
  }
  bool parsed() const override { return false; }

 private:
  double alpha_, t_;
};

class PowerNode final : public Node {
 public:
  explicit PowerNode(cplx z) : Node(Domain::Positive), z_(z) {}
  cplx eval(cplx x, int k) const override {
    if (x == cplx(0.0)) throw DomainError("power function at zero");
    const cplx lg = is_real(x) && x.real() > 0 ? cplx(std::log(x.real())) : std::log(x);
    return falling(z_, k) * std::exp((z_ - static_cast<double>(k)) * lg);
  }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override {
    out += "(power " + format_real(z_.real()) + " " + format_real(z_.imag()) + ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += "pow(" + arg + "," + format_number_infix(z_) + ")";
  }
  bool parsed() const override { return false; }

 private:
  cplx z_;
};

class ModulationNode final : public Node {
 public:
  explicit ModulationNode(double w) : Node(Domain::RealLine), w_(w) {}
  cplx eval(cplx z, int k) const override { return int_power(cplx(0.0, w_), k) * std::exp(cplx(0.0, w_) * z); }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override { out += "(mod " + format_real(w_) + ")"; }
  void infix(std::string& out, const std::string& arg) const override {
    out += "exp(i*(" + format_real(w_) + ")*" + arg + ")";
  }
  bool parsed() const override { return false; }

 private:
  double w_;
};

class GaussianNode final : public Node {
 public:
  explicit GaussianNode(double w) : Node(Domain::RealLine), w_(w) {}
  cplx eval(cplx z, int k) const override {
    const cplx u = z / w_;
    // d^k/du^k e^{-u^2} = (-1)^k H_k(u) e^{-u^2}, physicists' Hermite.
    cplx h0 = 1.0, h1 = 2.0 * u;
    cplx hk = k == 0 ? h0 : h1;
    for (int n = 1; n < k; ++n) {
      hk = 2.0 * u * h1 - 2.0 * static_cast<double>(n) * h0;
      h0 = h1;
      h1 = hk;
    }
    const double sign = k % 2 ? -1.0 : 1.0;
    return sign * std::pow(w_, -k) * hk * std::exp(-u * u);
  }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override { out += "(gauss " + format_real(w_) + ")"; }
  void infix(std::string& out, const std::string& arg) const override {
    out += "exp(-((" + arg + "/(" + format_real(w_) + "))^2))";
  }
  bool parsed() const override { return false; }

 private:
  double w_;
};

class BumpNode final : public Node {
 public:
  BumpNode(double c, double r, double a) : Node(Domain::RealLine), c_(c), r_(r), a_(a) {}
  cplx eval(cplx z, int k) const override {
    if (!is_real(z)) throw DomainError("bump evaluated off the real line");
    return std::pow(r_, -k) * bump_derivative((z.real() - c_) / r_, k, a_);
  }
  int order() const override { return kAllOrders; }
  void prefix(std::string& out) const override {
    out += "(bumpw " + format_real(c_) + " " + format_real(r_) + " " + format_real(a_) + ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    const std::string u = "((" + arg + "-(" + format_real(c_) + "))/(" + format_real(r_) + "))";
    if (a_ == 1.0)
      out += "bump(" + u + ")";
    else
      out += "bumpw(" + u + "," + format_real(a_) + ")";
  }
  bool parsed() const override { return false; }

 private:
  double c_, r_, a_;
};

class NegateNode final : public Node {
 public:
  explicit NegateNode(NodePtr a) : Node(a->domain), a_(std::move(a)) {}
  cplx eval(cplx z, int k) const override { return -a_->eval(z, k); }
  int order() const override { return a_->order(); }
  void prefix(std::string& out) const override {
    out += "(neg ";
    a_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += "(-";
    a_->infix(out, arg);
    out += ")";
  }
  bool parsed() const override { return a_->parsed(); }

 private:
  NodePtr a_;
};

class BinaryNode final : public Node {
 public:
  BinaryNode(BinaryOp op, NodePtr a, NodePtr b)
      : Node(intersect(a->domain, b->domain)), op_(op), a_(std::move(a)), b_(std::move(b)) {}
  cplx eval(cplx z, int k) const override {
    switch (op_) {
      case BinaryOp::Add:
        return a_->eval(z, k) + b_->eval(z, k);
      case BinaryOp::Sub:
        return a_->eval(z, k) - b_->eval(z, k);
      case BinaryOp::Mul: {
        if (k == 0) return a_->eval(z, 0) * b_->eval(z, 0);
        cplx s = 0.0;
        for (int j = 0; j <= k; ++j) s += binomial(k, j) * a_->eval(z, j) * b_->eval(z, k - j);
        return s;
      }
      case BinaryOp::Div: {
        const cplx d = b_->eval(z, 0);
        if (d == cplx(0.0)) throw DomainError("division by zero");
        return a_->eval(z, 0) / d;
      }
      case BinaryOp::Pow:
        return pow_value(a_->eval(z, 0), b_->eval(z, 0));
    }
    return 0.0;
  }
  int order() const override {
    if (op_ == BinaryOp::Div || op_ == BinaryOp::Pow) return 0;
    return std::min(a_->order(), b_->order());
  }
  void prefix(std::string& out) const override {
    static const char* names[] = {"+", "-", "*", "/", "^"};
    out += "(";
    out += names[static_cast<int>(op_)];
    out += " ";
    a_->prefix(out);
    out += " ";
    b_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    static const char* names[] = {"+", "-", "*", "/", "^"};
    out += "(";
    a_->infix(out, arg);
    out += names[static_cast<int>(op_)];
    b_->infix(out, arg);
    out += ")";
  }
  bool parsed() const override { return a_->parsed() || b_->parsed(); }

 private:
  BinaryOp op_;
  NodePtr a_, b_;
};

class CallNode final : public Node {
 public:
  CallNode(CallFn fn, std::vector<NodePtr> args) : Node(args.front()->domain), fn_(fn), args_(std::move(args)) {
    for (const auto& a : args_) domain = intersect(domain, a->domain);
  }
  cplx eval(cplx z, int) const override {
    const cplx a = args_[0]->eval(z, 0);
    switch (fn_) {
      case CallFn::Exp:
        return std::exp(a);
      case CallFn::Sin:
        return std::sin(a);
      case CallFn::Cos:
        return std::cos(a);
      case CallFn::Log:
        if (a == cplx(0.0)) throw DomainError("log of zero");
        return is_real(a) && a.real() > 0 ? cplx(std::log(a.real())) : std::log(a);
      case CallFn::Abs:
        return std::abs(a);
      case CallFn::Pow:
        return pow_value(a, args_[1]->eval(z, 0));
      case CallFn::Bump:
        if (!is_real(a)) throw DomainError("bump of a complex argument");
        return bump_derivative(a.real(), 0, 1.0);
    }
    return 0.0;
  }
  int order() const override { return 0; }
  void prefix(std::string& out) const override {
    out += "(";
    out += call_name(fn_);
    for (const auto& a : args_) {
      out += " ";
      a->prefix(out);
    }
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += call_name(fn_);
    out += "(";
    for (std::size_t j = 0; j < args_.size(); ++j) {
      if (j) out += ",";
      args_[j]->infix(out, arg);
    }
    out += ")";
  }
  bool parsed() const override { return true; }

 private:
  CallFn fn_;
  std::vector<NodePtr> args_;
};

class DilateNode final : public Node {
 public:
  DilateNode(double s, NodePtr f) : Node(f->domain), s_(s), f_(std::move(f)) {}
  cplx eval(cplx z, int k) const override { return std::pow(s_, k) * f_->eval(s_ * z, k); }
  int order() const override { return f_->order(); }
  void prefix(std::string& out) const override {
    out += "(dilate " + format_real(s_) + " ";
    f_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    f_->infix(out, "((" + format_real(s_) + ")*" + arg + ")");
  }
  bool parsed() const override { return f_->parsed(); }

 private:
  double s_;
  NodePtr f_;
};

class ExpSubstituteNode final : public Node {
 public:
  explicit ExpSubstituteNode(NodePtr f) : Node(Domain::RealLine), f_(std::move(f)) {}
  cplx eval(cplx z, int k) const override {
    const cplx e = is_real(z) ? cplx(std::exp(z.real())) : std::exp(z);
    if (k == 0) return f_->eval(e, 0);
    // Faa di Bruno for f(e^x): sum_j S(k,j) e^{jx} f^(j)(e^x).
    const auto s = stirling_row(k);
    cplx sum = 0.0, ej = 1.0;
    for (int j = 1; j <= k; ++j) {
      ej *= e;
      sum += s[j] * ej * f_->eval(e, j);
    }
    return sum;
  }
  int order() const override { return f_->order(); }
  void prefix(std::string& out) const override {
    out += "(expsub ";
    f_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override { f_->infix(out, "exp(" + arg + ")"); }
  bool parsed() const override { return f_->parsed(); }

 private:
  NodePtr f_;
};

class DerivativeNode final : public Node {
 public:
  DerivativeNode(int k, NodePtr f) : Node(f->domain), k_(k), f_(std::move(f)) {}
  cplx eval(cplx z, int k) const override { return f_->eval(z, k_ + k); }
  int order() const override { return f_->order() == kAllOrders ? kAllOrders : f_->order() - k_; }
  void prefix(std::string& out) const override {
    out += "(d " + std::to_string(k_) + " ";
    f_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += "D" + std::to_string(k_) + "[";
    f_->infix(out, arg);
    out += "]";
  }
  bool parsed() const override { return f_->parsed(); }

 private:
  int k_;
  NodePtr f_;
};

class FiniteDifferenceNode final : public Node {
 public:
  FiniteDifferenceNode(int k, NodePtr f) : Node(f->domain), k_(k), f_(std::move(f)) {}
  cplx eval(cplx z, int) const override {
    const double h = finite_difference_step(std::abs(z), k_);
    cplx sum = 0.0;
    for (int j = 0; j <= k_; ++j) {
      const double sign = j % 2 ? -1.0 : 1.0;
      sum += sign * binomial(k_, j) * f_->eval(z + (0.5 * k_ - j) * h, 0);
    }
    return sum / std::pow(h, k_);
  }
  int order() const override { return 0; }
  void prefix(std::string& out) const override {
    out += "(fd " + std::to_string(k_) + " ";
    f_->prefix(out);
    out += ")";
  }
  void infix(std::string& out, const std::string& arg) const override {
    out += "FD" + std::to_string(k_) + "[";
    f_->infix(out, arg);
    out += "]";
  }
  bool parsed() const override { return f_->parsed(); }

 private:
  int k_;
  NodePtr f_;
};

}  // namespace

Domain intersect(Domain a, Domain b) { return static_cast<int>(a) > static_cast<int>(b) ? a : b; }

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_number_infix(cplx v) {
  if (v.imag() == 0.0) return v.real() < 0 ? paren(format_real(v.real())) : format_real(v.real());
  if (v.real() == 0.0) return paren(format_real(v.imag()) + "i");
  const std::string im = format_real(std::abs(v.imag())) + "i";
  return paren(format_real(v.real()) + (v.imag() < 0 ? "-" : "+") + im);
}

std::string format_number_prefix(cplx v) {
  if (v.imag() == 0.0) return format_real(v.real());
  return "(c " + format_real(v.real()) + " " + format_real(v.imag()) + ")";
}

const char* call_name(CallFn fn) {
  static const char* names[] = {"exp", "sin", "cos", "log", "abs", "pow", "bump"};
  return names[static_cast<int>(fn)];
}

std::size_t call_arity(CallFn fn) { return fn == CallFn::Pow ? 2 : 1; }

NodePtr make_number(cplx v) { return std::make_shared<NumberNode>(v, true); }
NodePtr make_variable(Domain d) { return std::make_shared<VariableNode>(d, true); }
NodePtr make_constant(cplx v) { return std::make_shared<NumberNode>(v, false); }
NodePtr make_identity(Domain d) { return std::make_shared<VariableNode>(d, false); }
NodePtr make_f_alpha(double alpha, double t) { return std::make_shared<FAlphaNode>(alpha, t); }
NodePtr make_power(cplx z) { return std::make_shared<PowerNode>(z); }
NodePtr make_modulation(double omega) { return std::make_shared<ModulationNode>(omega); }
NodePtr make_gaussian(double width) { return std::make_shared<GaussianNode>(width); }
NodePtr make_bump(double c, double r, double a) { return std::make_shared<BumpNode>(c, r, a); }
NodePtr make_negate(NodePtr a) { return std::make_shared<NegateNode>(std::move(a)); }
NodePtr make_binary(BinaryOp op, NodePtr a, NodePtr b) {
  return std::make_shared<BinaryNode>(op, std::move(a), std::move(b));
}
NodePtr make_call(CallFn fn, std::vector<NodePtr> args) { return std::make_shared<CallNode>(fn, std::move(args)); }
NodePtr make_dilate(double s, NodePtr f) { return std::make_shared<DilateNode>(s, std::move(f)); }
NodePtr make_exp_substitute(NodePtr f) { return std::make_shared<ExpSubstituteNode>(std::move(f)); }
NodePtr make_derivative(int k, NodePtr f) { return std::make_shared<DerivativeNode>(k, std::move(f)); }
NodePtr make_fd_derivative(int k, NodePtr f) { return std::make_shared<FiniteDifferenceNode>(k, std::move(f)); }

}  // namespace detail

using namespace detail;

std::string to_string(Domain d) {
  switch (d) {
    case Domain::RealLine:
      return "real";
    case Domain::NonNegative:
      return "nonneg";
    case Domain::Positive:
      return "pos";
  }
  return "real";
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " at position " + std::to_string(position)), position_(position) {}

FuncExpr::FuncExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

FuncExpr FuncExpr::constant(cplx c) { return FuncExpr(make_constant(c)); }
FuncExpr FuncExpr::identity(Domain domain) { return FuncExpr(make_identity(domain)); }

FuncExpr FuncExpr::f_alpha(double alpha, double t) {
  if (!(alpha > 0)) throw std::invalid_argument("f_alpha: alpha must be positive");
  return FuncExpr(make_f_alpha(alpha, t));
}

FuncExpr FuncExpr::power(cplx z) { return FuncExpr(make_power(z)); }
FuncExpr FuncExpr::modulation(double omega) { return FuncExpr(make_modulation(omega)); }

FuncExpr FuncExpr::gaussian(double width) {
  if (!(width > 0)) throw std::invalid_argument("gaussian: width must be positive");
  return FuncExpr(make_gaussian(width));
}

FuncExpr FuncExpr::bump(double center, double radius, double sharpness) {
  if (!(radius > 0) || !(sharpness > 0)) throw std::invalid_argument("bump: radius and sharpness must be positive");
  return FuncExpr(make_bump(center, radius, sharpness));
}

FuncExpr builtin_f_alpha(double alpha, double t) { return FuncExpr::f_alpha(alpha, t); }

cplx FuncExpr::operator()(cplx z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw DomainError("non-finite evaluation point");
  const Domain d = node_->domain;
  if (d != Domain::RealLine) {
    const bool ok = z.imag() == 0.0 ? (d == Domain::NonNegative ? z.real() >= 0 : z.real() > 0) : z.real() > 0;
    if (!ok) throw DomainError("point outside the " + to_string(d) + " domain");
  }
  const cplx v = node_->eval(z, 0);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("non-finite value");
  return v;
}

FuncExpr::Kind FuncExpr::kind() const { return node_->parsed() ? Kind::Parsed : Kind::Builtin; }
Domain FuncExpr::domain() const { return node_->domain; }
int FuncExpr::derivative_order_available() const { return node_->order(); }

FuncExpr FuncExpr::derivative(int k, bool allow_finite_differences) const {
  if (k < 0) throw std::invalid_argument("derivative: negative order");
  if (k == 0) return *this;
  if (k <= node_->order()) return FuncExpr(make_derivative(k, node_));
  if (!allow_finite_differences)
    throw std::invalid_argument("derivative: order " + std::to_string(k) + " unavailable in closed form");
  return FuncExpr(make_fd_derivative(k, node_));
}

FuncExpr FuncExpr::dilate(double s) const {
  if (!(s > 0)) throw std::invalid_argument("dilate: scale must be positive");
  return FuncExpr(make_dilate(s, node_));
}

FuncExpr FuncExpr::exp_substitute() const { return FuncExpr(make_exp_substitute(node_)); }
FuncExpr FuncExpr::operator*(const FuncExpr& g) const { return FuncExpr(make_binary(BinaryOp::Mul, node_, g.node_)); }
FuncExpr FuncExpr::operator+(const FuncExpr& g) const { return FuncExpr(make_binary(BinaryOp::Add, node_, g.node_)); }
FuncExpr FuncExpr::operator-(const FuncExpr& g) const { return FuncExpr(make_binary(BinaryOp::Sub, node_, g.node_)); }
FuncExpr FuncExpr::operator-() const { return FuncExpr(make_negate(node_)); }
FuncExpr operator*(cplx a, const FuncExpr& f) { return FuncExpr::constant(a) * f; }

std::string FuncExpr::to_prefix() const {
  std::string out;
  node_->prefix(out);
  return out;
}

std::string FuncExpr::to_infix() const {
  std::string out;
  node_->infix(out, "x");
  return out;
}

std::vector<PointValue> eval(const FuncExpr& f, std::span<const cplx> points) {
  std::vector<PointValue> out;
  out.reserve(points.size());
  for (const cplx z : points) {
    PointValue pv{z, std::nullopt, {}};
    try {
      pv.value = f(z);
    } catch (const DomainError& e) {
      pv.error = e.what();
    }
    out.push_back(std::move(pv));
  }
  return out;
}

double finite_difference_step(double x, int k) {
  // Orders above two lose too many digits at 1e-5; use eps^(1/(k+2)).
  const double base = k <= 2 ? 1e-5 : std::pow(2.220446049250313e-16, 1.0 / (k + 2));
  return std::max(base, base * std::abs(x));
}

}  // namespace mlab
