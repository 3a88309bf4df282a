#include "implicert/model_expr.hpp"

#include <cctype>
#include <charconv>
#include <optional>

namespace implicert {

ParseError::ParseError(const std::string& message, int line, int column)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column) {}

namespace {

std::size_t table_size(int d) { return std::size_t{1} << d; }

void validate(const ExprNode& node, int d) {
  switch (node.kind) {
    case ExprKind::Const:
      if (!is_sign(node.index)) throw std::invalid_argument("constant must be -1 or +1");
      break;
    case ExprKind::Var:
      if (node.index < 0 || node.index >= d) {
        throw std::invalid_argument("variable x" + std::to_string(node.index) + " out of range for d=" +
                                    std::to_string(d));
      }
      break;
    case ExprKind::Not:
      if (node.children.size() != 1) throw std::invalid_argument("not takes one argument");
      break;
    case ExprKind::And:
    case ExprKind::Or:
    case ExprKind::Xor:
      if (node.children.empty()) throw std::invalid_argument("and/or/xor need at least one argument");
      break;
    case ExprKind::Maj:
      if (node.children.size() % 2 == 0) throw std::invalid_argument("maj needs an odd number of arguments");
      break;
    case ExprKind::Tree:
      if (node.index < 0 || node.index >= d) {
        throw std::invalid_argument("tree split x" + std::to_string(node.index) + " out of range for d=" +
                                    std::to_string(d));
      }
      if (node.children.size() != 2) throw std::invalid_argument("tree takes a feature and two branches");
      break;
    case ExprKind::Table:
      if (d > kMaxTableDimension) throw std::invalid_argument("table literals require d <= 20");
      if (!node.table || node.table->size() != table_size(d)) {
        throw std::invalid_argument("table literal must have exactly 2^d entries");
      }
      break;
  }
  for (const auto& c : node.children) validate(c, d);
}

Sign eval(const ExprNode& node, std::span<const Sign> x) {
  switch (node.kind) {
    case ExprKind::Const:
      return static_cast<Sign>(node.index);
    case ExprKind::Var:
      return x[static_cast<std::size_t>(node.index)];
    case ExprKind::Not:
      return static_cast<Sign>(-eval(node.children[0], x));
    case ExprKind::And:
      for (const auto& c : node.children) {
        if (eval(c, x) < 0) return kNeg;
      }
      return kPos;
    case ExprKind::Or:
      for (const auto& c : node.children) {
        if (eval(c, x) > 0) return kPos;
      }
      return kNeg;
    case ExprKind::Xor: {
      int prod = 1;
      for (const auto& c : node.children) prod *= eval(c, x);
      return static_cast<Sign>(prod);
    }
    case ExprKind::Maj: {
      int sum = 0;
      for (const auto& c : node.children) sum += eval(c, x);
      return sum > 0 ? kPos : kNeg;
    }
    case ExprKind::Tree:
      return x[static_cast<std::size_t>(node.index)] < 0 ? eval(node.children[0], x)
                                                          : eval(node.children[1], x);
    case ExprKind::Table: {
      std::size_t code = 0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] > 0) code |= std::size_t{1} << i;
      }
      return (*node.table)[code];
    }
  }
  return kPos;
}

// ---------------------------------------------------------------------------
// Parsing

struct Token {
  enum Type { Open, Close, Atom, End } type;
  std::string text;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    if (pos_ >= src_.size()) return {Token::End, "", line_, col_};
    int line = line_, col = col_;
    char c = src_[pos_];
    if (c == '(' || c == ')') {
      advance();
      return {c == '(' ? Token::Open : Token::Close, std::string(1, c), line, col};
    }
    std::string text;
    while (pos_ < src_.size()) {
      char ch = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch)) || ch == '(' || ch == ')' || ch == ';') break;
      text.push_back(ch);
      advance();
    }
    return {Token::Atom, text, line, col};
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// Parsed before the dimension is known; positions kept for diagnostics.
struct RawNode {
  ExprKind kind = ExprKind::Const;
  int index = 1;
  std::vector<RawNode> children;
  std::string hex;
  int line = 0;
  int column = 0;
};

std::optional<int> parse_int(std::string_view s) {
  if (!s.empty() && s[0] == '+') s.remove_prefix(1);
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<int> parse_var_atom(std::string_view s) {
  if (s.size() < 2 || s[0] != 'x') return std::nullopt;
  for (char c : s.substr(1)) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  return parse_int(s.substr(1));
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { tok_ = lex_.next(); }

  ModelExpr parse() {
    if (tok_.type == Token::End) throw ParseError("empty model text", tok_.line, tok_.column);
    RawNode raw = parse_expr();
    if (tok_.type != Token::Atom || tok_.text.rfind("d=", 0) != 0) {
      throw ParseError("expected dimension 'd=<int>' after expression", tok_.line, tok_.column);
    }
    auto d = parse_int(std::string_view(tok_.text).substr(2));
    if (!d || *d < 0) throw ParseError("malformed dimension '" + tok_.text + "'", tok_.line, tok_.column);
    bump();
    if (tok_.type != Token::End) throw ParseError("unexpected trailing input '" + tok_.text + "'", tok_.line, tok_.column);
    ExprNode root = lower(raw, *d);
    return ModelExpr(std::move(root), *d);
  }

 private:
  void bump() { tok_ = lex_.next(); }

  RawNode parse_expr() {
    if (tok_.type == Token::Atom) {
      auto v = parse_var_atom(tok_.text);
      if (!v) throw ParseError("unexpected atom '" + tok_.text + "'", tok_.line, tok_.column);
      RawNode n{ExprKind::Var, *v, {}, {}, tok_.line, tok_.column};
      bump();
      return n;
    }
    if (tok_.type != Token::Open) {
      throw ParseError(tok_.type == Token::End ? "unexpected end of input" : "unexpected ')'", tok_.line,
                       tok_.column);
    }
    RawNode n;
    n.line = tok_.line;
    n.column = tok_.column;
    bump();
    if (tok_.type != Token::Atom) throw ParseError("expected operator name", tok_.line, tok_.column);
    std::string head = tok_.text;
    Token head_tok = tok_;
    bump();
    if (head == "const") {
      n.kind = ExprKind::Const;
      auto v = tok_.type == Token::Atom ? parse_int(tok_.text) : std::nullopt;
      if (!v || !is_sign(*v)) throw ParseError("const expects +1 or -1", tok_.line, tok_.column);
      n.index = *v;
      bump();
    } else if (head == "var") {
      n.kind = ExprKind::Var;
      auto v = tok_.type == Token::Atom ? parse_int(tok_.text) : std::nullopt;
      if (!v || *v < 0) throw ParseError("var expects a non-negative index", tok_.line, tok_.column);
      n.index = *v;
      bump();
    } else if (head == "table") {
      n.kind = ExprKind::Table;
      if (tok_.type != Token::Atom) throw ParseError("table expects hex digits", tok_.line, tok_.column);
      n.hex = tok_.text;
      bump();
    } else if (head == "tree") {
      n.kind = ExprKind::Tree;
      std::optional<int> v;
      if (tok_.type == Token::Atom) v = parse_var_atom(tok_.text) ? parse_var_atom(tok_.text) : parse_int(tok_.text);
      if (!v || *v < 0) throw ParseError("tree expects a feature index", tok_.line, tok_.column);
      n.index = *v;
      bump();
      n.children.push_back(parse_expr());
      n.children.push_back(parse_expr());
    } else {
      if (head == "not") {
        n.kind = ExprKind::Not;
      } else if (head == "and") {
        n.kind = ExprKind::And;
      } else if (head == "or") {
        n.kind = ExprKind::Or;
      } else if (head == "xor") {
        n.kind = ExprKind::Xor;
      } else if (head == "maj") {
        n.kind = ExprKind::Maj;
      } else {
        throw ParseError("unknown operator '" + head + "'", head_tok.line, head_tok.column);
      }
      while (tok_.type != Token::Close) {
        if (tok_.type == Token::End) throw ParseError("unterminated '('", n.line, n.column);
        n.children.push_back(parse_expr());
      }
      std::size_t k = n.children.size();
      if (n.kind == ExprKind::Not && k != 1) throw ParseError("not takes exactly one argument", n.line, n.column);
      if (k == 0) throw ParseError("'" + head + "' needs at least one argument", n.line, n.column);
      if (n.kind == ExprKind::Maj && k % 2 == 0) {
        throw ParseError("maj needs an odd number of arguments", n.line, n.column);
      }
    }
    if (tok_.type != Token::Close) throw ParseError("expected ')'", tok_.line, tok_.column);
    bump();
    return n;
  }

  ExprNode lower(const RawNode& raw, int d) {
    ExprNode out;
    out.kind = raw.kind;
    out.index = raw.index;
    if ((raw.kind == ExprKind::Var || raw.kind == ExprKind::Tree) && raw.index >= d) {
      throw ParseError("variable x" + std::to_string(raw.index) + " out of range for d=" + std::to_string(d),
                       raw.line, raw.column);
    }
    if (raw.kind == ExprKind::Table) {
      if (d > kMaxTableDimension) throw ParseError("table literals require d <= 20", raw.line, raw.column);
      try {
        out.table = std::make_shared<const std::vector<Sign>>(decode_table_hex(raw.hex, d));
      } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("dimension mismatch: ") + e.what(), raw.line, raw.column);
      }
    }
    out.children.reserve(raw.children.size());
    for (const auto& c : raw.children) out.children.push_back(lower(c, d));
    return out;
  }

  Lexer lex_;
  Token tok_;
};

void print_node(const ExprNode& n, int d, std::string& out) {
  auto list = [&](const char* head) {
    out += "(";
    out += head;
    for (const auto& c : n.children) {
      out += " ";
      print_node(c, d, out);
    }
    out += ")";
  };
  switch (n.kind) {
    case ExprKind::Const:
      out += n.index > 0 ? "(const +1)" : "(const -1)";
      break;
    case ExprKind::Var:
      out += "x" + std::to_string(n.index);
      break;
    case ExprKind::Not:
      list("not");
      break;
    case ExprKind::And:
      list("and");
      break;
    case ExprKind::Or:
      list("or");
      break;
    case ExprKind::Xor:
      list("xor");
      break;
    case ExprKind::Maj:
      list("maj");
      break;
    case ExprKind::Tree:
      out += "(tree " + std::to_string(n.index) + " ";
      print_node(n.children[0], d, out);
      out += " ";
      print_node(n.children[1], d, out);
      out += ")";
      break;
    case ExprKind::Table:
      out += "(table " + encode_table_hex(*n.table, d) + ")";
      break;
  }
}

}  // namespace

ModelExpr::ModelExpr(ExprNode root, int dimension) : root_(std::move(root)), dimension_(dimension) {
  if (dimension_ < 0) throw std::invalid_argument("negative dimension");
  validate(root_, dimension_);
}

Sign ModelExpr::evaluate(std::span<const Sign> x) const {
  if (static_cast<int>(x.size()) != dimension_) {
    throw std::invalid_argument("instance has dimension " + std::to_string(x.size()) + ", model expects " +
                                std::to_string(dimension_));
  }
  return eval(root_, x);
}

ModelExpr parse_model(std::string_view text) { return Parser(text).parse(); }

std::string print_model(const ModelExpr& model) {
  std::string out;
  print_node(model.root(), model.dimension(), out);
  out += " d=" + std::to_string(model.dimension());
  return out;
}

std::string encode_table_hex(std::span<const Sign> labels, int d) {
  if (labels.size() != table_size(d)) throw std::invalid_argument("table must have 2^d entries");
  std::size_t digits = (labels.size() + 3) / 4;
  std::string out(digits, '0');
  static constexpr char kHex[] = "0123456789abcdef";
  for (std::size_t k = 0; k < digits; ++k) {
    // digit k from the right covers codes 4k .. 4k+3
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t code = 4 * k + b;
      if (code < labels.size() && labels[code] > 0) nibble |= 1U << b;
    }
    out[digits - 1 - k] = kHex[nibble];
  }
  return out;
}

std::vector<Sign> decode_table_hex(std::string_view hex, int d) {
  if (d < 0 || d > kMaxTableDimension) throw std::invalid_argument("table dimension over cap");
  std::size_t n = table_size(d);
  std::size_t digits = (n + 3) / 4;
  if (hex.size() != digits) {
    throw std::invalid_argument("table for d=" + std::to_string(d) + " needs " + std::to_string(digits) +
                                " hex digits, got " + std::to_string(hex.size()));
  }
  std::vector<Sign> labels(n, kNeg);
  for (std::size_t k = 0; k < digits; ++k) {
    char c = static_cast<char>(std::tolower(static_cast<unsigned char>(hex[digits - 1 - k])));
    unsigned nibble;
    if (c >= '0' && c <= '9') {
      nibble = static_cast<unsigned>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      nibble = static_cast<unsigned>(c - 'a' + 10);
    } else {
      throw std::invalid_argument(std::string("non-hex digit '") + c + "' in table");
    }
    for (std::size_t b = 0; b < 4; ++b) {
      std::size_t code = 4 * k + b;
      if (!((nibble >> b) & 1U)) continue;
      if (code >= n) throw std::invalid_argument("table has bits set beyond 2^d entries");
      labels[code] = kPos;
    }
  }
  return labels;
}

namespace expr {

ExprNode constant(Sign value) { return ExprNode{ExprKind::Const, value, {}, nullptr}; }
ExprNode var(int i) { return ExprNode{ExprKind::Var, i, {}, nullptr}; }
ExprNode negate(ExprNode e) {
  ExprNode n{ExprKind::Not, 0, {}, nullptr};
  n.children.push_back(std::move(e));
  return n;
}
ExprNode conj(std::vector<ExprNode> es) { return ExprNode{ExprKind::And, 0, std::move(es), nullptr}; }
ExprNode disj(std::vector<ExprNode> es) { return ExprNode{ExprKind::Or, 0, std::move(es), nullptr}; }
ExprNode parity(std::vector<ExprNode> es) { return ExprNode{ExprKind::Xor, 0, std::move(es), nullptr}; }
ExprNode majority(std::vector<ExprNode> es) { return ExprNode{ExprKind::Maj, 0, std::move(es), nullptr}; }
ExprNode tree(int feature, ExprNode on_neg, ExprNode on_pos) {
  ExprNode n{ExprKind::Tree, feature, {}, nullptr};
  n.children.push_back(std::move(on_neg));
  n.children.push_back(std::move(on_pos));
  return n;
}
ExprNode table(std::vector<Sign> labels) {
  return ExprNode{ExprKind::Table, 0, {}, std::make_shared<const std::vector<Sign>>(std::move(labels))};
}

}  // namespace expr

}  // namespace implicert
