#include "jetlag/dsl.hpp"

#include <array>
#include <charconv>
#include <cstdlib>
#include <sstream>

namespace jetlag::dsl {

namespace {

constexpr std::array<std::pair<std::string_view, Fn>, 9> kFunctions{{
    {"sin", Fn::Sin},
    {"cos", Fn::Cos},
    {"tan", Fn::Tan},
    {"exp", Fn::Exp},
    {"log", Fn::Log},
    {"sqrt", Fn::Sqrt},
    {"sinh", Fn::Sinh},
    {"cosh", Fn::Cosh},
    {"abs", Fn::Abs},
}};

constexpr int kMaxDepth = 200;

std::string render_message(std::size_t line, std::size_t col, const std::string& msg,
                           const std::vector<std::string>& expected) {
  std::ostringstream os;
  os << line << ":" << col << ": " << msg;
  if (!expected.empty()) {
    os << " (expected ";
    for (std::size_t k = 0; k < expected.size(); ++k) {
      if (k) os << ", ";
      os << expected[k];
    }
    os << ")";
  }
  return os.str();
}

std::pair<std::size_t, std::size_t> line_col(std::string_view src, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < src.size(); ++k) {
    if (src[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::End: return "end of input";
    case Tok::Number:
    case Tok::Ident: return "'" + std::string(t.text) + "'";
    default: return "'" + std::string(t.text) + "'";
  }
}

bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class Parser {
 public:
  Parser(std::string_view src, const Dims& dims) : src_(src), dims_(dims) { advance(); }

  NodePtr parse_all() {
    NodePtr e = expr(0);
    if (cur_.kind != Tok::End) fail(cur_.offset, "unexpected " + describe(cur_), {"operator", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void fail(std::size_t offset, const std::string& msg, std::vector<std::string> expected) {
    throw ParseError(offset, msg, std::move(expected), src_);
  }

  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r')) {
      ++pos_;
    }
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      cur_ = t;
      return;
    }
    char c = src_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = src_.substr(pos_, 1);
      ++pos_;
    };
    switch (c) {
      case '+': single(Tok::Plus); break;
      case '-': single(Tok::Minus); break;
      case '*': single(Tok::Star); break;
      case '/': single(Tok::Slash); break;
      case '^': single(Tok::Caret); break;
      case '(': single(Tok::LParen); break;
      case ')': single(Tok::RParen); break;
      default:
        if (is_digit(c) || c == '.') {
          lex_number(t);
        } else if (is_ident_start(c)) {
          std::size_t b = pos_;
          while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
          t.kind = Tok::Ident;
          t.text = src_.substr(b, pos_ - b);
        } else {
          fail(pos_, "invalid character", {"number", "identifier", "'('", "'-'"});
        }
    }
    cur_ = t;
  }

  void lex_number(Token& t) {
    std::size_t b = pos_;
    bool digits = false;
    while (pos_ < src_.size() && is_digit(src_[pos_])) {
      ++pos_;
      digits = true;
    }
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) {
        ++pos_;
        digits = true;
      }
    }
    if (!digits) fail(b, "malformed number", {"digit"});
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ >= src_.size() || !is_digit(src_[pos_])) {
        fail(save, "malformed exponent", {"digit"});
      }
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    t.kind = Tok::Number;
    t.text = src_.substr(b, pos_ - b);
    // strtod accepts a superset of the lexed form; the copy guarantees termination.
    std::string s(t.text);
    char* end = nullptr;
    t.number = std::strtod(s.c_str(), &end);
    if (!std::isfinite(t.number)) fail(b, "number out of range", {});
  }

  NodePtr make(Op op, std::size_t offset, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->offset = offset;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  void enter(std::size_t depth) {
    if (depth > kMaxDepth) fail(cur_.offset, "expression nested too deeply", {});
  }

  NodePtr expr(std::size_t depth) {
    enter(depth);
    NodePtr lhs = term(depth + 1);
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
      std::size_t off = cur_.offset;
      advance();
      lhs = make(op, off, lhs, term(depth + 1));
    }
    return lhs;
  }

  NodePtr term(std::size_t depth) {
    enter(depth);
    NodePtr lhs = unary(depth + 1);
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
      std::size_t off = cur_.offset;
      advance();
      lhs = make(op, off, lhs, unary(depth + 1));
    }
    return lhs;
  }

  NodePtr unary(std::size_t depth) {
    enter(depth);
    if (cur_.kind == Tok::Minus) {
      std::size_t off = cur_.offset;
      advance();
      return make(Op::Neg, off, power(depth + 1));
    }
    return power(depth + 1);
  }

  NodePtr power(std::size_t depth) {
    enter(depth);
    NodePtr base = atom(depth + 1);
    if (cur_.kind == Tok::Caret) {
      std::size_t off = cur_.offset;
      advance();
      return make(Op::Pow, off, base, unary(depth + 1));
    }
    return base;
  }

  NodePtr atom(std::size_t depth) {
    enter(depth);
    Token t = cur_;
    switch (t.kind) {
      case Tok::Number: {
        advance();
        auto n = std::make_shared<Node>();
        n->op = Op::Const;
        n->value = t.number;
        n->offset = t.offset;
        return n;
      }
      case Tok::LParen: {
        advance();
        NodePtr e = expr(depth + 1);
        expect_rparen(t.offset);
        return e;
      }
      case Tok::Ident: return ident(t, depth);
      default:
        fail(t.offset, "unexpected " + describe(t), {"number", "identifier", "'('", "'-'"});
    }
  }

  void expect_rparen(std::size_t open) {
    if (cur_.kind != Tok::RParen) {
      fail(cur_.offset, "unbalanced '(' opened at offset " + std::to_string(open) + ", found " + describe(cur_),
           {"')'"});
    }
    advance();
  }

  NodePtr ident(const Token& t, std::size_t depth) {
    advance();
    if (cur_.kind == Tok::LParen) {
      auto f = function_from_name(t.text);
      if (!f) fail(t.offset, "unknown function '" + std::string(t.text) + "'",
                   {"sin", "cos", "tan", "exp", "log", "sqrt", "sinh", "cosh", "abs"});
      std::size_t open = cur_.offset;
      advance();
      NodePtr arg = expr(depth + 1);
      expect_rparen(open);
      auto n = std::make_shared<Node>();
      n->op = Op::Func;
      n->fn = *f;
      n->offset = t.offset;
      n->lhs = arg;
      return n;
    }
    return variable(t);
  }

  // t<a>, x<i>, v<i>_<a> with single nonzero digits.
  NodePtr variable(const Token& t) {
    std::string_view s = t.text;
    auto digit = [](char c) -> std::size_t { return static_cast<std::size_t>(c - '0'); };
    auto bad = [&]() {
      if (function_from_name(s)) fail(t.offset, "function '" + std::string(s) + "' needs an argument", {"'('"});
      fail(t.offset, "unknown identifier '" + std::string(s) + "'", {"t<a>", "x<i>", "v<i>_<a>", "function"});
    };
    auto node = std::make_shared<Node>();
    node->offset = t.offset;
    if ((s[0] == 't' || s[0] == 'x') && s.size() == 2 && s[1] >= '1' && s[1] <= '9') {
      std::size_t k = digit(s[1]) - 1;
      if (s[0] == 't') {
        if (k >= dims_.p) fail(t.offset, "temporal index out of range in '" + std::string(s) + "' (p = " +
                                             std::to_string(dims_.p) + ")", {});
        node->op = Op::VarT;
        node->alpha = k;
      } else {
        if (k >= dims_.n) fail(t.offset, "spatial index out of range in '" + std::string(s) + "' (n = " +
                                             std::to_string(dims_.n) + ")", {});
        node->op = Op::VarX;
        node->i = k;
      }
      return node;
    }
    if (s[0] == 'v' && s.size() == 4 && s[1] >= '1' && s[1] <= '9' && s[2] == '_' && s[3] >= '1' &&
        s[3] <= '9') {
      std::size_t i = digit(s[1]) - 1;
      std::size_t a = digit(s[3]) - 1;
      if (i >= dims_.n || a >= dims_.p) {
        fail(t.offset, "velocity index out of range in '" + std::string(s) + "' (n = " + std::to_string(dims_.n) +
                           ", p = " + std::to_string(dims_.p) + ")", {});
      }
      node->op = Op::VarV;
      node->i = i;
      node->alpha = a;
      return node;
    }
    bad();
    return nullptr;
  }

  std::string_view src_;
  Dims dims_;
  std::size_t pos_ = 0;
  Token cur_;
};

// Binding strength used by the formatter.
int level(const Node& n) {
  switch (n.op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    case Op::Const: return n.value < 0.0 || std::signbit(n.value) ? 3 : 5;
    default: return 5;
  }
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Keep the lexer's view of numbers: "inf"/"nan" never arise from parsing.
  return s;
}

void emit(const Node& n, std::string& out);

void emit_wrapped(const Node& n, bool wrap, std::string& out) {
  if (wrap) out += '(';
  emit(n, out);
  if (wrap) out += ')';
}

void emit(const Node& n, std::string& out) {
  switch (n.op) {
    case Op::Const:
      if (std::signbit(n.value)) {
        // Only constructed programmatically; parse yields Neg(Const).
        out += "-";
        out += format_number(-n.value);
      } else {
        out += format_number(n.value);
      }
      return;
    case Op::VarT: out += "t" + std::to_string(n.alpha + 1); return;
    case Op::VarX: out += "x" + std::to_string(n.i + 1); return;
    case Op::VarV: out += "v" + std::to_string(n.i + 1) + "_" + std::to_string(n.alpha + 1); return;
    case Op::Add:
    case Op::Sub:
      emit_wrapped(*n.lhs, level(*n.lhs) < 1, out);
      out += n.op == Op::Add ? " + " : " - ";
      emit_wrapped(*n.rhs, level(*n.rhs) <= 1, out);
      return;
    case Op::Mul:
    case Op::Div:
      emit_wrapped(*n.lhs, level(*n.lhs) < 2, out);
      out += n.op == Op::Mul ? " * " : " / ";
      emit_wrapped(*n.rhs, level(*n.rhs) <= 2 || n.rhs->op == Op::Neg, out);
      return;
    case Op::Neg:
      out += "-";
      emit_wrapped(*n.lhs, level(*n.lhs) < 4, out);
      return;
    case Op::Pow:
      emit_wrapped(*n.lhs, level(*n.lhs) < 5, out);
      out += "^";
      emit_wrapped(*n.rhs, level(*n.rhs) < 3, out);
      return;
    case Op::Func:
      out += function_name(n.fn);
      out += "(";
      emit(*n.lhs, out);
      out += ")";
      return;
  }
}

bool uses_impl(const Node& n, Op kind) {
  if (n.op == kind) return true;
  if (n.lhs && uses_impl(*n.lhs, kind)) return true;
  if (n.rhs && uses_impl(*n.rhs, kind)) return true;
  return false;
}

}  // namespace

std::optional<Fn> function_from_name(std::string_view name) {
  for (const auto& [s, f] : kFunctions)
    if (s == name) return f;
  return std::nullopt;
}

std::string_view function_name(Fn f) {
  for (const auto& [s, g] : kFunctions)
    if (g == f) return s;
  return "?";
}

ParseError::ParseError(std::size_t offset, std::string message, std::vector<std::string> expected,
                       std::string_view source)
    : Error(render_message(line_col(source, offset).first, line_col(source, offset).second, message, expected)),
      offset_(offset),
      message_(std::move(message)),
      expected_(std::move(expected)) {
  auto [l, c] = line_col(source, offset);
  line_ = l;
  column_ = c;
}

bool Expr::uses(Op var_kind) const { return root_ && uses_impl(*root_, var_kind); }

Expr parse(std::string_view source, const Dims& dims) {
  if (source.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw ParseError(0, "empty expression", {"number", "identifier", "'('", "'-'"}, source);
  }
  Parser p(source, dims);
  return Expr(p.parse_all());
}

std::string format(const Expr& e) {
  std::string out;
  emit(e.root(), out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const: return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case Op::VarT: return a.alpha == b.alpha;
    case Op::VarX: return a.i == b.i;
    case Op::VarV: return a.i == b.i && a.alpha == b.alpha;
    case Op::Neg: return structurally_equal(*a.lhs, *b.lhs);
    case Op::Func: return a.fn == b.fn && structurally_equal(*a.lhs, *b.lhs);
    default: return structurally_equal(*a.lhs, *b.lhs) && structurally_equal(*a.rhs, *b.rhs);
  }
}

Expr constant(double c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return Expr(n);
}

}  // namespace jetlag::dsl
