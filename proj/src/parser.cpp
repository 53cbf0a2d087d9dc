#include "mlab/funcspec.hpp"

#include "funcspec_nodes.hpp"

#include <cctype>
#include <cstdlib>
#include <map>

namespace mlab {

using namespace detail;

namespace {

enum class Tok { Number, Imaginary, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
  Tok type;
  std::size_t pos;
  std::string text;
  double value = 0.0;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      while (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) ++i;
      if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        if (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
          i = j;
          while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        }
      }
      const std::string text(s.substr(start, i - start));
      char* end = nullptr;
      const double v = std::strtod(text.c_str(), &end);
      if (end != text.c_str() + text.size()) throw ParseError("malformed number '" + text + "'", start);
      Tok type = Tok::Number;
      if (i < s.size() && s[i] == 'i' &&
          (i + 1 == s.size() || !std::isalnum(static_cast<unsigned char>(s[i + 1])))) {
        type = Tok::Imaginary;
        ++i;
      }
      out.push_back({type, start, text, v});
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      out.push_back({Tok::Ident, start, std::string(s.substr(start, i - start))});
      continue;
    }
    static const std::map<char, Tok> single{{'+', Tok::Plus},   {'-', Tok::Minus},  {'*', Tok::Star},
                                            {'/', Tok::Slash},  {'^', Tok::Caret},  {'(', Tok::LParen},
                                            {')', Tok::RParen}, {',', Tok::Comma}};
    const auto it = single.find(c);
    if (it == single.end()) throw ParseError(std::string("unexpected character '") + c + "'", start);
    out.push_back({it->second, start, std::string(1, c)});
    ++i;
  }
  out.push_back({Tok::End, s.size(), ""});
  return out;
}

// expr  := term (('+'|'-') term)*
// term  := unary (('*'|'/') unary)*
// unary := ('+'|'-') unary | power
// power := primary ('^' unary)?
class Parser {
 public:
  Parser(std::string_view text, Domain domain, std::string_view variable)
      : tokens_(tokenize(text)), domain_(domain), variable_(variable) {}

  NodePtr run() {
    NodePtr e = expr();
    if (peek().type != Tok::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return e;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  void expect(Tok t, const char* what) {
    if (peek().type != t) {
      const std::string got = peek().type == Tok::End ? "end of input" : "'" + peek().text + "'";
      throw ParseError(std::string("expected ") + what + ", found " + got, peek().pos);
    }
    ++pos_;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
      const BinaryOp op = take().type == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (peek().type == Tok::Star || peek().type == Tok::Slash) {
      const BinaryOp op = take().type == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
      lhs = make_binary(op, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (peek().type == Tok::Minus) {
      take();
      return make_negate(unary());
    }
    if (peek().type == Tok::Plus) {
      take();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (peek().type == Tok::Caret) {
      take();
      return make_binary(BinaryOp::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Number:
        take();
        return make_number(t.value);
      case Tok::Imaginary:
        take();
        return make_number(cplx(0.0, t.value));
      case Tok::LParen: {
        take();
        NodePtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return identifier();
      default: {
        const std::string got = t.type == Tok::End ? "end of input" : "'" + t.text + "'";
        throw ParseError("expected an operand, found " + got, t.pos);
      }
    }
  }

  NodePtr identifier() {
    const Token t = take();
    static const std::map<std::string, CallFn> functions{{"exp", CallFn::Exp}, {"sin", CallFn::Sin},
                                                         {"cos", CallFn::Cos}, {"log", CallFn::Log},
                                                         {"abs", CallFn::Abs}, {"pow", CallFn::Pow},
                                                         {"bump", CallFn::Bump}};
    const auto fn = functions.find(t.text);
    if (fn != functions.end()) {
      expect(Tok::LParen, "'(' after function name");
      std::vector<NodePtr> args{expr()};
      while (peek().type == Tok::Comma) {
        take();
        args.push_back(expr());
      }
      expect(Tok::RParen, "')'");
      if (args.size() != call_arity(fn->second))
        throw ParseError("function '" + t.text + "' takes " + std::to_string(call_arity(fn->second)) +
                             " argument(s), got " + std::to_string(args.size()),
                         t.pos);
      return make_call(fn->second, std::move(args));
    }
    if (t.text == variable_) return make_variable(domain_);
    if (t.text == "i") return make_number(cplx(0.0, 1.0));
    if (t.text == "pi") return make_number(kPi);
    throw ParseError("unknown identifier '" + t.text + "'", t.pos);
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Domain domain_;
  std::string variable_;
};

// S-expression reader for the canonical prefix form.
class PrefixReader {
 public:
  explicit PrefixReader(std::string_view s) : s_(s) {}

  NodePtr run() {
    NodePtr n = node();
    skip();
    if (i_ != s_.size()) throw ParseError("trailing input in prefix form", i_);
    return n;
  }

 private:
  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  std::string atom() {
    skip();
    const std::size_t start = i_;
    while (i_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[i_])) && s_[i_] != '(' && s_[i_] != ')') ++i_;
    if (start == i_) throw ParseError("expected an atom in prefix form", start);
    return std::string(s_.substr(start, i_ - start));
  }

  double number() {
    const std::size_t at = i_;
    const std::string a = atom();
    char* end = nullptr;
    const double v = std::strtod(a.c_str(), &end);
    if (end != a.c_str() + a.size()) throw ParseError("expected a number in prefix form", at);
    return v;
  }

  Domain domain() {
    const std::size_t at = i_;
    const std::string a = atom();
    if (a == "real") return Domain::RealLine;
    if (a == "nonneg") return Domain::NonNegative;
    if (a == "pos") return Domain::Positive;
    throw ParseError("unknown domain '" + a + "'", at);
  }

  void close() {
    skip();
    if (i_ >= s_.size() || s_[i_] != ')') throw ParseError("expected ')' in prefix form", i_);
    ++i_;
  }

  NodePtr node() {
    skip();
    if (i_ >= s_.size()) throw ParseError("unexpected end of prefix form", i_);
    if (s_[i_] != '(') {
      const std::size_t at = i_;
      const std::string a = atom();
      if (a == "x") return make_variable(Domain::RealLine);
      char* end = nullptr;
      const double v = std::strtod(a.c_str(), &end);
      if (end != a.c_str() + a.size()) throw ParseError("unknown atom '" + a + "'", at);
      return make_number(v);
    }
    ++i_;
    const std::size_t at = i_;
    const std::string head = atom();
    NodePtr out;
    static const std::map<std::string, BinaryOp> binary{
        {"+", BinaryOp::Add}, {"-", BinaryOp::Sub}, {"*", BinaryOp::Mul}, {"/", BinaryOp::Div}, {"^", BinaryOp::Pow}};
    static const std::map<std::string, CallFn> calls{{"exp", CallFn::Exp}, {"sin", CallFn::Sin},
                                                     {"cos", CallFn::Cos}, {"log", CallFn::Log},
                                                     {"abs", CallFn::Abs}, {"pow", CallFn::Pow},
                                                     {"bump", CallFn::Bump}};
    if (const auto b = binary.find(head); b != binary.end()) {
      NodePtr l = node();
      out = make_binary(b->second, l, node());
    } else if (const auto c = calls.find(head); c != calls.end()) {
      std::vector<NodePtr> args;
      for (std::size_t k = 0; k < call_arity(c->second); ++k) args.push_back(node());
      out = make_call(c->second, std::move(args));
    } else if (head == "c") {
      const double re = number();
      out = make_number(cplx(re, number()));
    } else if (head == "x") {
      out = make_variable(domain());
    } else if (head == "neg") {
      out = make_negate(node());
    } else if (head == "const") {
      const double re = number();
      out = make_constant(cplx(re, number()));
    } else if (head == "id") {
      out = make_identity(domain());
    } else if (head == "falpha") {
      const double a = number();
      out = make_f_alpha(a, number());
    } else if (head == "power") {
      const double re = number();
      out = make_power(cplx(re, number()));
    } else if (head == "mod") {
      out = make_modulation(number());
    } else if (head == "gauss") {
      out = make_gaussian(number());
    } else if (head == "bumpw") {
      const double c0 = number();
      const double r = number();
      out = make_bump(c0, r, number());
    } else if (head == "dilate") {
      const double s = number();
      out = make_dilate(s, node());
    } else if (head == "expsub") {
      out = make_exp_substitute(node());
    } else if (head == "d" || head == "fd") {
      const int k = static_cast<int>(number());
      NodePtr f = node();
      out = head == "d" ? make_derivative(k, f) : make_fd_derivative(k, f);
    } else {
      throw ParseError("unknown head '" + head + "' in prefix form", at);
    }
    close();
    return out;
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

FuncExpr parse(std::string_view text, Domain domain, std::string_view variable) {
  return FuncExpr(Parser(text, domain, variable).run());
}

FuncExpr FuncExpr::from_prefix(std::string_view text) { return FuncExpr(PrefixReader(text).run()); }

}  // namespace mlab
