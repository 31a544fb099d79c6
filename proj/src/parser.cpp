#include <cctype>
#include <map>
#include <sstream>
#include <utility>

#include "typecause/syntax.hpp"

namespace typecause {

// --- Span ------------------------------------------------------------------

bool Span::contains(const Span& other) const {
  if (module != other.module) return false;
  auto before_or_eq = [](int l1, int c1, int l2, int c2) { return l1 < l2 || (l1 == l2 && c1 <= c2); };
  return before_or_eq(start_line, start_col, other.start_line, other.start_col) &&
         before_or_eq(other.end_line, other.end_col, end_line, end_col);
}

std::string Span::to_string() const {
  std::ostringstream os;
  os << module << ':' << start_line << ':' << start_col << '-' << end_line << ':' << end_col;
  return os.str();
}

bool operator<(const Span& a, const Span& b) {
  return std::tie(a.module, a.start_line, a.start_col, a.end_line, a.end_col) <
         std::tie(b.module, b.start_line, b.start_col, b.end_line, b.end_col);
}

Span merge_spans(const Span& first, const Span& last) {
  Span s = first;
  s.end_line = last.end_line;
  s.end_col = last.end_col;
  s.end = last.end;
  return s;
}

SyntaxError::SyntaxError(Span span, const std::string& message)
    : std::runtime_error(span.to_string() + ": syntax error: " + message),
      span_(std::move(span)),
      message_(message) {}

namespace {

std::string join_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) {
    if (!out.empty()) out += '\n';
    out += d.span.to_string() + ": " + d.message;
  }
  return out;
}

}  // namespace

ResolveError::ResolveError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(join_diagnostics(diagnostics)), diagnostics_(std::move(diagnostics)) {}

// --- Lexer -----------------------------------------------------------------

namespace {

enum class Tok {
  LowerId,
  UpperId,
  Int,
  Float,
  Char,
  String,
  Op,
  LParen,
  RParen,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  Comma,
  Semi,
  Backslash,
  Arrow,
  Equals,
  DColon,
  Bar,
  Underscore,
  KwLet,
  KwIn,
  KwIf,
  KwThen,
  KwElse,
  KwCase,
  KwOf,
  KwData,
  KwImport,
  Sep,  // virtual: a new declaration starts at column 1
  End,
};

struct Token {
  Tok kind;
  std::string text;
  Span span;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::LowerId: return "identifier";
    case Tok::UpperId: return "constructor or type name";
    case Tok::Int: return "integer literal";
    case Tok::Float: return "decimal literal";
    case Tok::Char: return "character literal";
    case Tok::String: return "string literal";
    case Tok::Op: return "operator";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Backslash: return "'\\'";
    case Tok::Arrow: return "'->'";
    case Tok::Equals: return "'='";
    case Tok::DColon: return "'::'";
    case Tok::Bar: return "'|'";
    case Tok::Underscore: return "'_'";
    case Tok::KwLet: return "'let'";
    case Tok::KwIn: return "'in'";
    case Tok::KwIf: return "'if'";
    case Tok::KwThen: return "'then'";
    case Tok::KwElse: return "'else'";
    case Tok::KwCase: return "'case'";
    case Tok::KwOf: return "'of'";
    case Tok::KwData: return "'data'";
    case Tok::KwImport: return "'import'";
    case Tok::Sep: return "end of declaration";
    case Tok::End: return "end of input";
  }
  return "token";
}

bool is_symbol_char(char c) {
  switch (c) {
    case '!': case '#': case '$': case '%': case '&': case '*': case '+': case '.':
    case '/': case '<': case '=': case '>': case '?': case '@': case '^': case '|':
    case '-': case '~': case ':':
      return true;
    default:
      return false;
  }
}

bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

class Lexer {
 public:
  Lexer(std::string_view module, std::string_view src) : module_(module), src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    int depth = 0;
    while (true) {
      skip_trivia();
      if (pos_ >= src_.size()) break;
      Token t = next();
      if (t.span.start_col == 1 && depth == 0 && !out.empty() && out.back().kind != Tok::Sep &&
          out.back().kind != Tok::Semi) {
        Token sep{Tok::Sep, "", t.span};
        sep.span.end_line = t.span.start_line;
        sep.span.end_col = t.span.start_col;
        sep.span.end = t.span.begin;
        out.push_back(sep);
      }
      switch (t.kind) {
        case Tok::LParen: case Tok::LBracket: case Tok::LBrace: ++depth; break;
        case Tok::RParen: case Tok::RBracket: case Tok::RBrace: if (depth > 0) --depth; break;
        default: break;
      }
      out.push_back(std::move(t));
    }
    Token end{Tok::End, "", here()};
    if (!out.empty()) {
      // report "unexpected end" at the end of the last token, not after trailing blank lines
      const Span& last = out.back().span;
      end.span.start_line = end.span.end_line = last.end_line;
      end.span.start_col = end.span.end_col = last.end_col;
      end.span.begin = end.span.end = last.end;
    }
    out.push_back(end);
    return out;
  }

 private:
  Span here() const {
    Span s;
    s.module = std::string(module_);
    s.start_line = s.end_line = line_;
    s.start_col = s.end_col = col_;
    s.begin = s.end = pos_;
    return s;
  }

  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(here(), msg); }

  char peek(std::size_t k = 0) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        // a line comment is "--" followed by a non-symbol character
        std::size_t k = 2;
        while (peek(k) == '-') ++k;
        if (is_symbol_char(peek(k))) return;
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '{' && peek(1) == '-') {
        Span start = here();
        int nest = 0;
        do {
          if (pos_ >= src_.size()) throw SyntaxError(start, "unterminated block comment");
          if (peek() == '{' && peek(1) == '-') {
            ++nest;
            advance();
            advance();
          } else if (peek() == '-' && peek(1) == '}') {
            --nest;
            advance();
            advance();
          } else {
            advance();
          }
        } while (nest > 0);
      } else {
        return;
      }
    }
  }

  Token finish(Tok kind, const Span& start) const {
    Token t{kind, std::string(src_.substr(start.begin, pos_ - start.begin)), start};
    t.span.end_line = line_;
    t.span.end_col = col_;
    t.span.end = pos_;
    return t;
  }

  void lex_escape() {
    advance();  // backslash
    if (pos_ >= src_.size()) fail("unterminated escape sequence");
    char c = peek();
    if (c == 'n' || c == 't' || c == '\\' || c == '\'' || c == '"' || c == 'r' || c == '0') {
      advance();
      return;
    }
    fail(std::string("unknown escape sequence '\\") + c + "'");
  }

  Token next() {
    Span start = here();
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
        advance();
        while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
        return finish(Tok::Float, start);
      }
      return finish(Tok::Int, start);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (is_ident_char(peek())) advance();
      Token t = finish(Tok::LowerId, start);
      static const std::map<std::string, Tok, std::less<>> keywords = {
          {"let", Tok::KwLet},   {"in", Tok::KwIn},     {"if", Tok::KwIf},
          {"then", Tok::KwThen}, {"else", Tok::KwElse}, {"case", Tok::KwCase},
          {"of", Tok::KwOf},     {"data", Tok::KwData}, {"import", Tok::KwImport},
          {"_", Tok::Underscore}};
      if (auto it = keywords.find(t.text); it != keywords.end()) {
        t.kind = it->second;
      } else if (std::isupper(static_cast<unsigned char>(c))) {
        t.kind = Tok::UpperId;
      }
      return t;
    }
    if (c == '\'') {
      advance();
      if (peek() == '\\') {
        lex_escape();
      } else if (pos_ < src_.size() && peek() != '\'' && peek() != '\n') {
        // one UTF-8 encoded character
        advance();
        while ((static_cast<unsigned char>(peek()) & 0xC0) == 0x80) advance();
      } else {
        fail("empty character literal");
      }
      if (peek() != '\'') fail("unterminated character literal");
      advance();
      return finish(Tok::Char, start);
    }
    if (c == '"') {
      advance();
      while (true) {
        if (pos_ >= src_.size() || peek() == '\n') throw SyntaxError(start, "unterminated string literal");
        if (peek() == '"') break;
        if (peek() == '\\') {
          lex_escape();
        } else {
          advance();
        }
      }
      advance();
      return finish(Tok::String, start);
    }
    switch (c) {
      case '(': advance(); return finish(Tok::LParen, start);
      case ')': advance(); return finish(Tok::RParen, start);
      case '[': advance(); return finish(Tok::LBracket, start);
      case ']': advance(); return finish(Tok::RBracket, start);
      case '{': advance(); return finish(Tok::LBrace, start);
      case '}': advance(); return finish(Tok::RBrace, start);
      case ',': advance(); return finish(Tok::Comma, start);
      case ';': advance(); return finish(Tok::Semi, start);
      case '\\': advance(); return finish(Tok::Backslash, start);
      default: break;
    }
    if (is_symbol_char(c)) {
      while (is_symbol_char(peek())) advance();
      Token t = finish(Tok::Op, start);
      if (t.text == "->") t.kind = Tok::Arrow;
      else if (t.text == "=") t.kind = Tok::Equals;
      else if (t.text == "::") t.kind = Tok::DColon;
      else if (t.text == "|") t.kind = Tok::Bar;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  std::string_view module_;
  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

// --- Parser ----------------------------------------------------------------

struct Fixity {
  int prec;
  enum Assoc { Left, Right, None } assoc;
};

Fixity fixity_of(const std::string& op) {
  static const std::map<std::string, Fixity, std::less<>> table = {
      {"$", {0, Fixity::Right}},   {"||", {2, Fixity::Right}},  {"&&", {3, Fixity::Right}},
      {"==", {4, Fixity::None}},   {"/=", {4, Fixity::None}},   {"<", {4, Fixity::None}},
      {"<=", {4, Fixity::None}},   {">", {4, Fixity::None}},    {">=", {4, Fixity::None}},
      {":", {5, Fixity::Right}},   {"++", {5, Fixity::Right}},  {"+", {6, Fixity::Left}},
      {"-", {6, Fixity::Left}},    {"+.", {6, Fixity::Left}},   {"-.", {6, Fixity::Left}},
      {"*", {7, Fixity::Left}},    {"/", {7, Fixity::Left}},    {"*.", {7, Fixity::Left}},
      {".", {9, Fixity::Right}},
  };
  if (auto it = table.find(op); it != table.end()) return it->second;
  return {9, Fixity::Left};
}

class Parser {
 public:
  Parser(std::vector<Token> toks, ParseOptions options) : toks_(std::move(toks)), options_(options) {}

  std::vector<Decl> module() {
    std::vector<Decl> decls;
    skip_separators();
    while (!at(Tok::End)) {
      decls.push_back(declaration());
      if (!at(Tok::End)) {
        if (!at(Tok::Sep) && !at(Tok::Semi)) fail_expected("end of declaration");
        skip_separators();
      }
    }
    if (!options_.allow_bare_signatures) check_signatures(decls);
    return decls;
  }

  Expr standalone_expression() {
    Expr e = expression();
    if (!at(Tok::End)) fail_expected("end of input");
    return e;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& look(std::size_t k) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_op(std::string_view op) const { return at(Tok::Op) && cur().text == op; }
  Token take() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }
  const Span& prev_span() const { return toks_[pos_ == 0 ? 0 : pos_ - 1].span; }

  [[noreturn]] void fail_expected(const std::string& what) const {
    std::string found = at(Tok::End) ? "end of input" : describe(cur().kind);
    if (!cur().text.empty()) found += " '" + cur().text + "'";
    throw SyntaxError(cur().span, "expected " + what + ", found " + found);
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail_expected(what);
    return take();
  }

  void skip_separators() {
    while (at(Tok::Sep) || at(Tok::Semi)) take();
  }

  static void check_signatures(const std::vector<Decl>& decls) {
    for (const auto& d : decls) {
      if (d.kind != DeclKind::Signature) continue;
      bool bound = false;
      for (const auto& v : decls)
        if (v.kind == DeclKind::Value && v.name.name == d.name.name) bound = true;
      if (!bound)
        throw SyntaxError(d.span, "type signature for '" + d.name.name + "' lacks an accompanying binding");
    }
  }

  // name or (op)
  bool at_binder_name() const {
    return at(Tok::LowerId) || (at(Tok::LParen) && look(1).kind == Tok::Op && look(2).kind == Tok::RParen);
  }

  Binder binder_name() {
    if (at(Tok::LowerId)) {
      Token t = take();
      return Binder{t.text, t.span, 0};
    }
    Token open = expect(Tok::LParen, "'('");
    Token op = expect(Tok::Op, "operator");
    Token close = expect(Tok::RParen, "')'");
    return Binder{op.text, merge_spans(open.span, close.span), 0};
  }

  Decl declaration() {
    Decl d;
    Span start = cur().span;
    if (at(Tok::KwImport)) {
      take();
      Token name = expect(Tok::UpperId, "module name");
      d.kind = DeclKind::Import;
      d.name = Binder{name.text, name.span, 0};
      d.span = merge_spans(start, name.span);
      return d;
    }
    if (at(Tok::KwData)) return data_declaration();
    if (!at_binder_name()) fail_expected("declaration");
    d.name = binder_name();
    if (at(Tok::DColon)) {
      take();
      d.kind = DeclKind::Signature;
      d.type = type();
      d.span = merge_spans(start, d.type.span);
      return d;
    }
    d.kind = DeclKind::Value;
    while (at(Tok::LowerId) || at(Tok::Underscore)) {
      Token p = take();
      d.params.push_back(Binder{p.text, p.span, 0});
    }
    expect(Tok::Equals, "'=' or '::'");
    d.body = expression();
    d.span = merge_spans(start, d.body.span);
    return d;
  }

  Decl data_declaration() {
    Decl d;
    d.kind = DeclKind::Data;
    Span start = take().span;
    Token name = expect(Tok::UpperId, "type name");
    d.name = Binder{name.text, name.span, 0};
    while (at(Tok::LowerId)) d.type_params.push_back(take().text);
    expect(Tok::Equals, "'='");
    while (true) {
      Token cname = expect(Tok::UpperId, "constructor name");
      DataConstructor c{cname.text, cname.span, {}};
      while (at_atype_start()) c.fields.push_back(atype());
      if (!c.fields.empty()) c.span = merge_spans(cname.span, c.fields.back().span);
      d.constructors.push_back(std::move(c));
      if (!at(Tok::Bar)) break;
      take();
    }
    d.span = merge_spans(start, prev_span());
    return d;
  }

  // --- types ---

  bool at_atype_start() const {
    return at(Tok::LowerId) || at(Tok::UpperId) || at(Tok::LParen) || at(Tok::LBracket);
  }

  TypeExpr type() {
    TypeExpr lhs = btype();
    if (at(Tok::Arrow)) {
      take();
      TypeExpr rhs = type();
      TypeExpr fn;
      fn.kind = TypeExprKind::Fn;
      fn.span = merge_spans(lhs.span, rhs.span);
      fn.args.push_back(std::move(lhs));
      fn.args.push_back(std::move(rhs));
      return fn;
    }
    return lhs;
  }

  TypeExpr btype() {
    if (at(Tok::UpperId)) {
      Token name = take();
      TypeExpr t;
      t.kind = TypeExprKind::Con;
      t.name = name.text;
      t.span = name.span;
      while (at_atype_start()) t.args.push_back(atype());
      if (!t.args.empty()) t.span = merge_spans(name.span, t.args.back().span);
      return t;
    }
    return atype();
  }

  TypeExpr atype() {
    TypeExpr t;
    Span start = cur().span;
    if (at(Tok::LowerId)) {
      Token v = take();
      t.kind = TypeExprKind::Var;
      t.name = v.text;
      t.span = v.span;
      return t;
    }
    if (at(Tok::UpperId)) {
      Token v = take();
      t.kind = TypeExprKind::Con;
      t.name = v.text;
      t.span = v.span;
      return t;
    }
    if (at(Tok::LBracket)) {
      take();
      t.kind = TypeExprKind::List;
      t.args.push_back(type());
      expect(Tok::RBracket, "']'");
      t.span = merge_spans(start, prev_span());
      return t;
    }
    if (at(Tok::LParen)) {
      take();
      TypeExpr first = type();
      if (at(Tok::RParen)) {
        take();
        return first;
      }
      t.kind = TypeExprKind::Tuple;
      t.args.push_back(std::move(first));
      while (at(Tok::Comma)) {
        take();
        t.args.push_back(type());
      }
      expect(Tok::RParen, "')' or ','");
      t.span = merge_spans(start, prev_span());
      return t;
    }
    fail_expected("type");
  }

  // --- expressions ---

  static Expr make(ExprKind kind, Span span, std::string text = {}) {
    Expr e;
    e.kind = kind;
    e.span = std::move(span);
    e.text = std::move(text);
    return e;
  }

  Expr expression() { return op_expression(0); }

  Expr op_expression(int min_prec) {
    Expr lhs = operand();
    while (at(Tok::Op) || at(Tok::Bar)) {
      if (at(Tok::Bar)) break;
      Fixity f = fixity_of(cur().text);
      if (f.prec < min_prec) break;
      Token op = take();
      int next_min = f.assoc == Fixity::Right ? f.prec : f.prec + 1;
      Expr rhs = op_expression(next_min);
      Expr app = make(ExprKind::Apply, merge_spans(lhs.span, rhs.span));
      app.children.push_back(make(ExprKind::Var, op.span, op.text));
      app.children.push_back(std::move(lhs));
      app.children.push_back(std::move(rhs));
      lhs = std::move(app);
    }
    return lhs;
  }

  Expr operand() {
    switch (cur().kind) {
      case Tok::Backslash: return lambda();
      case Tok::KwLet: return let_expression();
      case Tok::KwIf: return if_expression();
      case Tok::KwCase: return case_expression();
      default:
        if (at_negative_number()) {
          Token minus = take();
          Token lit = take();
          return make(literal_kind(lit), merge_spans(minus.span, lit.span), "-" + lit.text);
        }
        return application();
    }
  }

  // A '-' immediately followed by a numeric literal in operand position.
  bool at_negative_number() const {
    const Token& next = look(1);
    return at_op("-") && (next.kind == Tok::Int || next.kind == Tok::Float) && next.span.begin == cur().span.end;
  }

  Expr lambda() {
    Span start = take().span;
    Expr e = make(ExprKind::Lambda, start);
    while (at(Tok::LowerId) || at(Tok::Underscore)) {
      Token p = take();
      e.params.push_back(Binder{p.text, p.span, 0});
    }
    if (e.params.empty()) fail_expected("lambda parameter");
    expect(Tok::Arrow, "'->'");
    e.children.push_back(expression());
    e.span = merge_spans(start, e.children.back().span);
    return e;
  }

  Expr let_expression() {
    Span start = take().span;
    Expr e = make(ExprKind::Let, start);
    bool braced = at(Tok::LBrace);
    if (braced) take();
    while (true) {
      if (!at(Tok::LowerId)) fail_expected("let binding");
      LetBinding b;
      Token name = take();
      b.name = Binder{name.text, name.span, 0};
      while (at(Tok::LowerId) || at(Tok::Underscore)) {
        Token p = take();
        b.params.push_back(Binder{p.text, p.span, 0});
      }
      expect(Tok::Equals, "'='");
      b.body = expression();
      b.span = merge_spans(name.span, b.body.span);
      e.bindings.push_back(std::move(b));
      if (at(Tok::Semi)) {
        take();
        if (braced && at(Tok::RBrace)) break;
        continue;
      }
      break;
    }
    if (braced) expect(Tok::RBrace, "'}'");
    expect(Tok::KwIn, "'in'");
    e.children.push_back(expression());
    e.span = merge_spans(start, e.children.back().span);
    return e;
  }

  Expr if_expression() {
    Span start = take().span;
    Expr e = make(ExprKind::If, start);
    e.children.push_back(expression());
    expect(Tok::KwThen, "'then'");
    e.children.push_back(expression());
    expect(Tok::KwElse, "'else'");
    e.children.push_back(expression());
    e.span = merge_spans(start, e.children.back().span);
    return e;
  }

  Expr case_expression() {
    Span start = take().span;
    Expr e = make(ExprKind::Case, start);
    e.children.push_back(expression());
    expect(Tok::KwOf, "'of'");
    expect(Tok::LBrace, "'{' after 'of'");
    while (!at(Tok::RBrace)) {
      Alternative alt;
      alt.pattern = pattern();
      expect(Tok::Arrow, "'->'");
      alt.body = expression();
      e.alts.push_back(std::move(alt));
      if (at(Tok::Semi)) {
        take();
        continue;
      }
      break;
    }
    if (e.alts.empty()) fail_expected("case alternative");
    expect(Tok::RBrace, "'}' or ';'");
    e.span = merge_spans(start, prev_span());
    return e;
  }

  Binder pattern_var() {
    if (!at(Tok::LowerId) && !at(Tok::Underscore)) fail_expected("pattern variable");
    Token t = take();
    return Binder{t.text, t.span, 0};
  }

  static bool is_literal(Tok k) {
    return k == Tok::Int || k == Tok::Float || k == Tok::Char || k == Tok::String;
  }

  static ExprKind literal_kind(const Token& t) {
    switch (t.kind) {
      case Tok::Int: return ExprKind::IntLit;
      case Tok::Float: return ExprKind::FloatLit;
      case Tok::Char: return ExprKind::CharLit;
      case Tok::String: return ExprKind::StringLit;
      default: return ExprKind::BoolLit;
    }
  }

  static bool is_bool_name(const std::string& s) { return s == "True" || s == "False"; }

  Pattern pattern() {
    Pattern p;
    Span start = cur().span;
    if (at(Tok::Underscore)) {
      p.kind = PatternKind::Wildcard;
      p.span = p.head_span = take().span;
      return p;
    }
    if (at(Tok::LowerId)) {
      p.kind = PatternKind::Var;
      Token v = take();
      p.span = p.head_span = v.span;
      p.vars.push_back(Binder{v.text, v.span, 0});
      return p;
    }
    if (at_negative_number()) {
      Token minus = take();
      Token lit = take();
      p.kind = PatternKind::Literal;
      p.literal_kind = literal_kind(lit);
      p.text = "-" + lit.text;
      p.span = p.head_span = merge_spans(minus.span, lit.span);
      return p;
    }
    if (is_literal(cur().kind) || (at(Tok::UpperId) && is_bool_name(cur().text))) {
      Token lit = take();
      p.kind = PatternKind::Literal;
      p.literal_kind = literal_kind(lit);
      p.text = lit.text;
      p.span = p.head_span = lit.span;
      return p;
    }
    if (at(Tok::UpperId)) {
      Token c = take();
      p.kind = PatternKind::Ctor;
      p.text = c.text;
      p.head_span = c.span;
      while (at(Tok::LowerId) || at(Tok::Underscore)) p.vars.push_back(pattern_var());
      p.span = merge_spans(start, prev_span());
      return p;
    }
    if (at(Tok::LBracket)) {
      take();
      expect(Tok::RBracket, "']' (only the empty list pattern is supported)");
      p.kind = PatternKind::Ctor;
      p.text = "[]";
      p.span = p.head_span = merge_spans(start, prev_span());
      return p;
    }
    if (at(Tok::LParen)) {
      take();
      if (at(Tok::UpperId) && !is_bool_name(cur().text)) {
        Token c = take();
        p.kind = PatternKind::Ctor;
        p.text = c.text;
        p.head_span = c.span;
        while (at(Tok::LowerId) || at(Tok::Underscore)) p.vars.push_back(pattern_var());
        expect(Tok::RParen, "')'");
        p.span = merge_spans(start, prev_span());
        return p;
      }
      Binder first = pattern_var();
      if (at_op(":")) {
        Token colon = take();
        p.kind = PatternKind::Ctor;
        p.text = ":";
        p.head_span = colon.span;
        p.vars.push_back(std::move(first));
        p.vars.push_back(pattern_var());
      } else {
        p.kind = PatternKind::Tuple;
        p.vars.push_back(std::move(first));
        if (!at(Tok::Comma)) fail_expected("',' or ':' in pattern");
        while (at(Tok::Comma)) {
          take();
          p.vars.push_back(pattern_var());
        }
      }
      expect(Tok::RParen, "')'");
      p.span = merge_spans(start, prev_span());
      if (p.kind == PatternKind::Tuple) p.head_span = p.span;
      return p;
    }
    fail_expected("pattern");
  }

  bool at_atom_start() const {
    switch (cur().kind) {
      case Tok::LowerId: case Tok::UpperId: case Tok::Int: case Tok::Float: case Tok::Char:
      case Tok::String: case Tok::LParen: case Tok::LBracket:
        return true;
      default:
        return false;
    }
  }

  Expr application() {
    if (!at_atom_start()) fail_expected("expression");
    Expr fn = atom();
    if (!at_atom_start()) return fn;
    Expr app = make(ExprKind::Apply, fn.span);
    app.children.push_back(std::move(fn));
    while (at_atom_start()) app.children.push_back(atom());
    app.span = merge_spans(app.children.front().span, app.children.back().span);
    return app;
  }

  Expr atom() {
    Span start = cur().span;
    if (is_literal(cur().kind)) {
      Token t = take();
      return make(literal_kind(t), t.span, t.text);
    }
    if (at(Tok::LowerId)) {
      Token t = take();
      return make(ExprKind::Var, t.span, t.text);
    }
    if (at(Tok::UpperId)) {
      Token t = take();
      return make(is_bool_name(t.text) ? ExprKind::BoolLit : ExprKind::Ctor, t.span, t.text);
    }
    if (at(Tok::LBracket)) {
      take();
      Expr e = make(ExprKind::List, start);
      if (!at(Tok::RBracket)) {
        e.children.push_back(expression());
        while (at(Tok::Comma)) {
          take();
          e.children.push_back(expression());
        }
      }
      expect(Tok::RBracket, "']' or ','");
      e.span = merge_spans(start, prev_span());
      return e;
    }
    if (at(Tok::LParen)) {
      take();
      if (at(Tok::Op) && look(1).kind == Tok::RParen) {
        Token op = take();
        take();
        return make(ExprKind::Var, merge_spans(start, prev_span()), op.text);
      }
      Expr first = expression();
      if (at(Tok::RParen)) {
        take();
        return first;  // parentheses are transparent
      }
      Expr e = make(ExprKind::Tuple, start);
      e.children.push_back(std::move(first));
      while (at(Tok::Comma)) {
        take();
        e.children.push_back(expression());
      }
      expect(Tok::RParen, "')' or ','");
      e.span = merge_spans(start, prev_span());
      return e;
    }
    fail_expected("expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  ParseOptions options_;
};

}  // namespace

std::vector<Decl> parse_module(std::string_view module_id, std::string_view source,
                               const ParseOptions& options) {
  Parser p(Lexer(module_id, source).run(), options);
  return p.module();
}

Expr parse_expression(std::string_view module_id, std::string_view source) {
  auto toks = Lexer(module_id, source).run();
  // an expression never contains declaration separators
  std::erase_if(toks, [](const Token& t) { return t.kind == Tok::Sep; });
  Parser p(std::move(toks), {});
  return p.standalone_expression();
}

namespace {

bool same_pattern(const Pattern& a, const Pattern& b) {
  if (a.kind != b.kind || a.text != b.text || a.vars.size() != b.vars.size()) return false;
  for (std::size_t i = 0; i < a.vars.size(); ++i)
    if (a.vars[i].name != b.vars[i].name) return false;
  return true;
}

bool same_binders(const std::vector<Binder>& a, const std::vector<Binder>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].name != b[i].name) return false;
  return true;
}

}  // namespace

bool same_structure(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.text != b.text || a.children.size() != b.children.size() ||
      a.bindings.size() != b.bindings.size() || a.alts.size() != b.alts.size() ||
      !same_binders(a.params, b.params))
    return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(a.children[i], b.children[i])) return false;
  for (std::size_t i = 0; i < a.bindings.size(); ++i) {
    const auto& x = a.bindings[i];
    const auto& y = b.bindings[i];
    if (x.name.name != y.name.name || !same_binders(x.params, y.params) || !same_structure(x.body, y.body))
      return false;
  }
  for (std::size_t i = 0; i < a.alts.size(); ++i) {
    if (!same_pattern(a.alts[i].pattern, b.alts[i].pattern) ||
        !same_structure(a.alts[i].body, b.alts[i].body))
      return false;
  }
  return true;
}

}  // namespace typecause
