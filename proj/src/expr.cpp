#include "hessolve/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

namespace hessolve::expr {

namespace {

enum Code {
  kPushConst = 1,
  kPushX,
  kPushY,
  kPushZ,
  kAdd,
  kSub,
  kMul,
  kDiv,
  kPow,
  kNeg,
  kSin,
  kCos,
  kTan,
  kExp,
  kLog,
  kSqrt,
  kAbs,
  kTanh,
  kMin,
  kMax,
};

struct Token {
  enum Kind { kNumber, kIdent, kOperator, kLParen, kRParen, kComma } kind;
  double number = 0.0;
  std::string name;
  char op = 0;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      char* end = nullptr;
      const double v = std::strtod(s.c_str() + i, &end);
      if (end == s.c_str() + i) throw InvalidSpec("expression: bad number at '" + s.substr(i) + "'");
      out.push_back({Token::kNumber, v, "", 0});
      i = end - s.c_str();
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::kIdent, 0.0, s.substr(i, j - i), 0});
      i = j;
    } else if (c == '(') {
      out.push_back({Token::kLParen, 0.0, "", 0});
      ++i;
    } else if (c == ')') {
      out.push_back({Token::kRParen, 0.0, "", 0});
      ++i;
    } else if (c == ',') {
      out.push_back({Token::kComma, 0.0, "", 0});
      ++i;
    } else if (c == '+' || c == '-' || c == '*' || c == '/' || c == '^') {
      out.push_back({Token::kOperator, 0.0, "", c});
      ++i;
    } else {
      throw InvalidSpec(std::string("expression: unexpected character '") + c + "'");
    }
  }
  return out;
}

const std::map<std::string, std::pair<int, int>>& functions() {
  // name -> (opcode, arity)
  static const std::map<std::string, std::pair<int, int>> table = {
      {"sin", {kSin, 1}},   {"cos", {kCos, 1}},   {"tan", {kTan, 1}},
      {"exp", {kExp, 1}},   {"log", {kLog, 1}},   {"sqrt", {kSqrt, 1}},
      {"abs", {kAbs, 1}},   {"tanh", {kTanh, 1}}, {"min", {kMin, 2}},
      {"max", {kMax, 2}},   {"pow", {kPow, 2}},
  };
  return table;
}

// Recursive-descent parser emitting postfix ops.
class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<std::pair<int, double>>* program)
      : tokens_(std::move(tokens)), program_(program) {}

  void run() {
    parse_sum();
    if (pos_ != tokens_.size()) throw InvalidSpec("expression: trailing input");
  }

 private:
  const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

  const Token& next() {
    if (pos_ >= tokens_.size()) throw InvalidSpec("expression: unexpected end of input");
    return tokens_[pos_++];
  }

  bool eat_op(char c) {
    const Token* t = peek();
    if (t && t->kind == Token::kOperator && t->op == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void emit(int code, double v = 0.0) { program_->push_back({code, v}); }

  void parse_sum() {
    parse_product();
    for (;;) {
      if (eat_op('+')) {
        parse_product();
        emit(kAdd);
      } else if (eat_op('-')) {
        parse_product();
        emit(kSub);
      } else {
        return;
      }
    }
  }

  void parse_product() {
    parse_unary();
    for (;;) {
      if (eat_op('*')) {
        parse_unary();
        emit(kMul);
      } else if (eat_op('/')) {
        parse_unary();
        emit(kDiv);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (eat_op('-')) {
      parse_unary();
      emit(kNeg);
    } else if (eat_op('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  void parse_power() {
    parse_atom();
    if (eat_op('^')) {
      parse_unary();  // right-associative, unary minus binds to the exponent
      emit(kPow);
    }
  }

  void parse_atom() {
    const Token& t = next();
    switch (t.kind) {
      case Token::kNumber:
        emit(kPushConst, t.number);
        return;
      case Token::kLParen:
        parse_sum();
        expect_rparen();
        return;
      case Token::kIdent: {
        if (t.name == "x") return emit(kPushX);
        if (t.name == "y") return emit(kPushY);
        if (t.name == "z") return emit(kPushZ);
        if (t.name == "pi") return emit(kPushConst, M_PI);
        if (t.name == "e") return emit(kPushConst, M_E);
        const auto it = functions().find(t.name);
        if (it == functions().end()) {
          throw InvalidSpec("expression: unknown identifier '" + t.name + "'");
        }
        const Token* open = peek();
        if (!open || open->kind != Token::kLParen) {
          throw InvalidSpec("expression: function '" + t.name + "' needs arguments");
        }
        ++pos_;
        parse_sum();
        for (int arg = 1; arg < it->second.second; ++arg) {
          const Token& comma = next();
          if (comma.kind != Token::kComma) {
            throw InvalidSpec("expression: function '" + t.name + "' expects " +
                              std::to_string(it->second.second) + " arguments");
          }
          parse_sum();
        }
        expect_rparen();
        emit(it->second.first);
        return;
      }
      default:
        throw InvalidSpec("expression: unexpected token");
    }
  }

  void expect_rparen() {
    const Token& t = next();
    if (t.kind != Token::kRParen) throw InvalidSpec("expression: missing ')'");
  }

  std::vector<Token> tokens_;
  std::vector<std::pair<int, double>>* program_;
  size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(const std::string& text) {
  Expression e;
  e.text_ = text;
  std::vector<std::pair<int, double>> prog;
  Parser parser(tokenize(text), &prog);
  parser.run();
  e.program_.reserve(prog.size());
  for (const auto& [code, value] : prog) e.program_.push_back({code, value});
  if (e.program_.empty()) throw InvalidSpec("expression: empty input");

  // Validate the postfix program against the fixed evaluation stack.
  int depth = 0, peak = 0;
  for (const auto& [code, value] : prog) {
    (void)value;
    if (code >= kPushConst && code <= kPushZ) {
      ++depth;
    } else if (code == kAdd || code == kSub || code == kMul || code == kDiv ||
               code == kPow || code == kMin || code == kMax) {
      --depth;
    }
    if (depth <= 0) throw InvalidSpec("expression: corrupt program");
    peak = std::max(peak, depth);
  }
  if (depth != 1 || peak >= 64) throw InvalidSpec("expression: too deep or malformed");
  return e;
}

double Expression::eval(double x, double y, double z) const {
  double stack[64];
  int top = 0;
  const auto push = [&](double v) { stack[top++] = v; };
  const auto pop = [&]() { return stack[--top]; };

  for (const Op& op : program_) {
    switch (op.code) {
      case kPushConst: push(op.value); break;
      case kPushX: push(x); break;
      case kPushY: push(y); break;
      case kPushZ: push(z); break;
      case kAdd: { const double b = pop(), a = pop(); push(a + b); break; }
      case kSub: { const double b = pop(), a = pop(); push(a - b); break; }
      case kMul: { const double b = pop(), a = pop(); push(a * b); break; }
      case kDiv: { const double b = pop(), a = pop(); push(a / b); break; }
      case kPow: { const double b = pop(), a = pop(); push(std::pow(a, b)); break; }
      case kNeg: push(-pop()); break;
      case kSin: push(std::sin(pop())); break;
      case kCos: push(std::cos(pop())); break;
      case kTan: push(std::tan(pop())); break;
      case kExp: push(std::exp(pop())); break;
      case kLog: push(std::log(pop())); break;
      case kSqrt: push(std::sqrt(pop())); break;
      case kAbs: push(std::abs(pop())); break;
      case kTanh: push(std::tanh(pop())); break;
      case kMin: { const double b = pop(), a = pop(); push(std::min(a, b)); break; }
      case kMax: { const double b = pop(), a = pop(); push(std::max(a, b)); break; }
      default: throw InvalidSpec("expression: corrupt program");
    }
  }
  return stack[0];
}

}  // namespace hessolve::expr
