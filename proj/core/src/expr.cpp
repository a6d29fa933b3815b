#include "mor/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <numbers>
#include <vector>

namespace mor {

namespace {

struct Node {
  virtual ~Node() = default;
  virtual double eval(double x, double y) const = 0;
};
using NodePtr = std::unique_ptr<Node>;

struct Constant : Node {
  double value;
  explicit Constant(double v) : value(v) {}
  double eval(double, double) const override { return value; }
};

struct Variable : Node {
  bool is_x;
  explicit Variable(bool x) : is_x(x) {}
  double eval(double x, double y) const override { return is_x ? x : y; }
};

struct Unary : Node {
  NodePtr arg;
  double (*fn)(double);
  Unary(NodePtr a, double (*f)(double)) : arg(std::move(a)), fn(f) {}
  double eval(double x, double y) const override { return fn(arg->eval(x, y)); }
};

struct Binary : Node {
  NodePtr lhs, rhs;
  double (*fn)(double, double);
  Binary(NodePtr l, NodePtr r, double (*f)(double, double))
      : lhs(std::move(l)), rhs(std::move(r)), fn(f) {}
  double eval(double x, double y) const override {
    return fn(lhs->eval(x, y), rhs->eval(x, y));
  }
};

double add(double a, double b) { return a + b; }
double sub(double a, double b) { return a - b; }
double mul(double a, double b) { return a * b; }
double divide(double a, double b) { return a / b; }
double minimum(double a, double b) { return a < b ? a : b; }
double maximum(double a, double b) { return a > b ? a : b; }
double negate(double a) { return -a; }
double power(double a, double b) { return std::pow(a, b); }
double arctan2(double a, double b) { return std::atan2(a, b); }
double hypotenuse(double a, double b) { return std::hypot(a, b); }
double sine(double a) { return std::sin(a); }
double cosine(double a) { return std::cos(a); }
double tangent(double a) { return std::tan(a); }
double exponential(double a) { return std::exp(a); }
double logarithm(double a) { return std::log(a); }
double square_root(double a) { return std::sqrt(a); }
double absolute(double a) { return std::fabs(a); }

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) {
      throw ExprError("unexpected trailing input at position " +
                      std::to_string(pos_) + " in '" + text_ + "'");
    }
    return root;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_space();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expression() {
    NodePtr lhs = term();
    while (true) {
      if (consume('+')) {
        lhs = std::make_unique<Binary>(std::move(lhs), term(), add);
      } else if (consume('-')) {
        lhs = std::make_unique<Binary>(std::move(lhs), term(), sub);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (consume('*')) {
        lhs = std::make_unique<Binary>(std::move(lhs), factor(), mul);
      } else if (consume('/')) {
        lhs = std::make_unique<Binary>(std::move(lhs), factor(), divide);
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    NodePtr base = unary();
    if (consume('^')) {
      return std::make_unique<Binary>(std::move(base), factor(), power);
    }
    return base;
  }

  NodePtr unary() {
    if (consume('-')) return std::make_unique<Unary>(unary(), negate);
    if (consume('+')) return unary();
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ExprError("unexpected end of expression");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    if (consume('(')) {
      NodePtr inner = expression();
      if (!consume(')')) throw ExprError("missing ')' in '" + text_ + "'");
      return inner;
    }
    throw ExprError(std::string("unexpected character '") + c + "' at position " +
                    std::to_string(pos_));
  }

  NodePtr number() {
    std::size_t end = pos_;
    const char* begin = text_.c_str() + pos_;
    char* after = nullptr;
    const double value = std::strtod(begin, &after);
    if (after == begin) throw ExprError("malformed number in '" + text_ + "'");
    end = pos_ + static_cast<std::size_t>(after - begin);
    pos_ = end;
    return std::make_unique<Constant>(value);
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);
    if (name == "x") return std::make_unique<Variable>(true);
    if (name == "y") return std::make_unique<Variable>(false);
    if (name == "pi") return std::make_unique<Constant>(std::numbers::pi);
    if (name == "e") return std::make_unique<Constant>(std::numbers::e);

    static const std::map<std::string, double (*)(double)> unary_fns = {
        {"sin", sine},        {"cos", cosine},      {"tan", tangent},
        {"exp", exponential}, {"log", logarithm},   {"sqrt", square_root},
        {"abs", absolute},
    };
    static const std::map<std::string, double (*)(double, double)> binary_fns =
        {{"atan2", arctan2},
         {"pow", power},
         {"min", minimum},
         {"max", maximum},
         {"hypot", hypotenuse}};

    if (auto it = unary_fns.find(name); it != unary_fns.end()) {
      if (!consume('(')) throw ExprError(name + " expects '('");
      NodePtr a = expression();
      if (!consume(')')) throw ExprError("missing ')' after " + name);
      return std::make_unique<Unary>(std::move(a), it->second);
    }
    if (auto it = binary_fns.find(name); it != binary_fns.end()) {
      if (!consume('(')) throw ExprError(name + " expects '('");
      NodePtr a = expression();
      if (!consume(',')) throw ExprError(name + " expects two arguments");
      NodePtr b = expression();
      if (!consume(')')) throw ExprError("missing ')' after " + name);
      return std::make_unique<Binary>(std::move(a), std::move(b), it->second);
    }
    throw ExprError("unknown identifier '" + name + "'");
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<double(double, double)> parse_expression(const std::string& text) {
  Parser parser(text);
  std::shared_ptr<Node> root{parser.parse().release()};
  return [root](double x, double y) { return root->eval(x, y); };
}

}  // namespace mor
