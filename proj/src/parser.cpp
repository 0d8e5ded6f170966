#include "slic/parser.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace slic {

namespace {

enum class Tok { Ident, Int, Real, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceLoc loc;
};

struct ParseFailure {
  Diagnostic diag;
};

[[noreturn]] void fail(SourceLoc loc, const std::string& msg) {
  throw ParseFailure{Diagnostic{loc.line, loc.column, msg}};
}

std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.loc = {line, col};
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.kind = Tok::Ident;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c)) ||
               (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      std::size_t j = i;
      bool is_real = false;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.') {
        is_real = true;
        ++j;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          is_real = true;
          j = k;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      t.kind = is_real ? Tok::Real : Tok::Int;
      t.text = src.substr(i, j - i);
      advance(j - i);
    } else {
      static const char* two[] = {"==", "<=", ">=", "!="};
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      for (const char* op : two)
        if (src.compare(i, 2, op) == 0) t.text = op;
      if (std::string("{}()[];,=~<>+-*/:|").find(c) == std::string::npos)
        fail(t.loc, std::string("unexpected character '") + c + "'");
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

const std::set<std::string> kKeywords = {"data", "model", "genquant", "l1",   "l2",     "l3",
                                         "real", "int",   "if",       "else", "for",    "in",
                                         "factor", "skip", "target",  "phi",  "elim",   "gen"};

std::optional<Slot> level_keyword(const std::string& s) {
  if (s == "data") return Slot::of(Level::Data);
  if (s == "model") return Slot::of(Level::Model);
  if (s == "genquant") return Slot::of(Level::Genquant);
  if (s == "l1") return Slot::of(CILevel::L1);
  if (s == "l2") return Slot::of(CILevel::L2);
  if (s == "l3") return Slot::of(CILevel::L3);
  return std::nullopt;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program program() {
    Program p;
    std::vector<StmtP> body;
    while (peek().kind != Tok::End) {
      if (starts_decl()) {
        declaration(p.gamma, body);
      } else {
        body.push_back(statement());
      }
    }
    p.body = seq(body);
    return p;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  Token next() {
    Token t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }
  bool is(const std::string& text, std::size_t k = 0) const {
    const Token& t = peek(k);
    return (t.kind == Tok::Punct || t.kind == Tok::Ident) && t.text == text;
  }
  bool accept(const std::string& text) {
    if (is(text)) {
      next();
      return true;
    }
    return false;
  }
  Token expect(const std::string& text) {
    if (!is(text)) {
      const Token& t = peek();
      fail(t.loc, "expected '" + text + "' but found " + describe(t));
    }
    return next();
  }
  static std::string describe(const Token& t) {
    if (t.kind == Tok::End) return "end of input";
    return "'" + t.text + "'";
  }
  std::string ident() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text)) fail(t.loc, "expected identifier but found " + describe(t));
    return next().text;
  }
  int positive_int() {
    const Token& t = peek();
    if (t.kind != Tok::Int) fail(t.loc, "expected integer literal but found " + describe(t));
    int v = std::stoi(t.text);
    if (v < 1) fail(t.loc, "bound must be positive");
    next();
    return v;
  }

  bool starts_decl() const {
    std::size_t k = 0;
    if (peek().kind == Tok::Ident && level_keyword(peek().text)) k = 1;
    return is("real", k) || is("int", k);
  }

  BaseType base_type() {
    BaseType t;
    if (accept("real")) {
      t = BaseType::real();
    } else {
      expect("int");
      int bound = 0;
      if (accept("<")) {
        bound = positive_int();
        expect(">");
      }
      t = BaseType::integer(bound);
    }
    std::vector<int> dims;
    while (accept("[")) {
      int size = 0;
      if (!is("]")) size = positive_int();
      expect("]");
      dims.push_back(size);
    }
    for (auto it = dims.rbegin(); it != dims.rend(); ++it) t = BaseType::array(t, *it);
    return t;
  }

  void declaration(Gamma& gamma, std::vector<StmtP>& body) {
    Slot slot = Slot::placeholder();
    if (auto lv = level_keyword(peek().text)) {
      slot = *lv;
      next();
    }
    BaseType type = base_type();
    auto declare = [&](const Token& name_tok) {
      if (gamma.contains(name_tok.text)) fail(name_tok.loc, "duplicate declaration of " + name_tok.text);
      gamma.add(name_tok.text, type, slot);
    };
    const Token name_tok = peek();
    std::string name = ident();
    declare(name_tok);
    if (accept("=")) {
      ExprP e = expr();
      body.push_back(assign(name, e, name_tok.loc));
    } else if (accept("~")) {
      auto [dist, args] = dist_call();
      body.push_back(sample(name, dist, args, name_tok.loc));
    } else {
      while (accept(",")) {
        const Token t = peek();
        ident();
        declare(t);
      }
    }
    expect(";");
  }

  std::pair<std::string, std::vector<ExprP>> dist_call() {
    std::string dist = ident();
    expect("(");
    std::vector<ExprP> args = expr_list(")");
    expect(")");
    return {dist, args};
  }

  std::vector<ExprP> expr_list(const std::string& close) {
    std::vector<ExprP> out;
    if (is(close)) return out;
    out.push_back(expr());
    while (accept(",")) out.push_back(expr());
    return out;
  }

  StmtP block_or_statement() {
    if (is("{")) return block();
    return statement();
  }

  StmtP block() {
    expect("{");
    std::vector<StmtP> stmts;
    while (!is("}")) {
      if (peek().kind == Tok::End) fail(peek().loc, "expected '}' but found end of input");
      if (starts_decl()) fail(peek().loc, "declarations are only allowed at top level");
      stmts.push_back(statement());
    }
    expect("}");
    return seq(stmts);
  }

  std::vector<Binder> binders() {
    std::vector<Binder> out;
    if (is(")")) return out;
    do {
      expect("int");
      expect("<");
      int K = positive_int();
      expect(">");
      out.push_back({ident(), K});
    } while (accept(","));
    return out;
  }

  StmtP statement() {
    const Token start = peek();
    SourceLoc loc = start.loc;
    if (is("{")) return block();
    if (accept("skip")) {
      expect(";");
      return skip();
    }
    if (accept("factor")) {
      expect("(");
      ExprP e = expr();
      expect(")");
      expect(";");
      return factor(e, loc);
    }
    if (accept("if")) {
      expect("(");
      ExprP g = expr();
      expect(")");
      StmtP a = block_or_statement();
      StmtP b = skip();
      if (accept("else")) b = block_or_statement();
      return if_else(g, a, b, loc);
    }
    if (accept("for")) {
      expect("(");
      if (peek().kind == Tok::Ident && level_keyword(peek().text)) next();
      accept("int");
      std::string x = ident();
      expect("in");
      ExprP lo = expr();
      expect(":");
      ExprP hi = expr();
      expect(")");
      return for_loop(x, lo, hi, block_or_statement(), loc);
    }
    if (is("elim") || is("gen")) {
      bool is_elim = next().text == "elim";
      expect("(");
      auto bs = binders();
      if (bs.size() != 1) fail(loc, std::string(is_elim ? "elim" : "gen") + " binds exactly one variable");
      expect(")");
      StmtP body = block_or_statement();
      return is_elim ? elim(bs[0].name, bs[0].K, body, loc) : gen(bs[0].name, bs[0].K, body, loc);
    }
    if (starts_decl()) fail(loc, "declarations are only allowed at top level");
    LValue lhs = lvalue();
    if (accept("=")) {
      ExprP e = expr();
      expect(";");
      return assign(lhs, e, loc);
    }
    if (accept("~")) {
      auto [dist, args] = dist_call();
      expect(";");
      return sample(lhs, dist, args, loc);
    }
    fail(peek().loc, "expected '=' or '~' but found " + describe(peek()));
  }

  LValue lvalue() {
    LValue l;
    l.loc = peek().loc;
    l.name = ident();
    while (accept("[")) {
      auto idx = expr_list("]");
      if (idx.empty()) fail(peek().loc, "empty index");
      expect("]");
      for (auto& i : idx) l.indices.push_back(i);
    }
    return l;
  }

  // Precedence climbing: comparisons < additive < multiplicative < unary.
  ExprP expr() { return comparison(); }

  ExprP comparison() {
    ExprP lhs = additive();
    while (is("<") || is(">") || is("==")) {
      Token op = next();
      lhs = call(op.text, {lhs, additive()}, op.loc);
    }
    return lhs;
  }

  ExprP additive() {
    ExprP lhs = multiplicative();
    while (is("+") || is("-")) {
      Token op = next();
      lhs = call(op.text, {lhs, multiplicative()}, op.loc);
    }
    return lhs;
  }

  ExprP multiplicative() {
    ExprP lhs = unary();
    while (is("*") || is("/")) {
      Token op = next();
      lhs = call(op.text, {lhs, unary()}, op.loc);
    }
    return lhs;
  }

  ExprP unary() {
    if (is("-")) {
      Token op = next();
      ExprP e = unary();
      if (e->kind == Expr::Kind::Real && !std::signbit(e->real)) return real_c(-e->real, op.loc);
      if (e->kind == Expr::Kind::Int && e->ival > 0) return int_c(-e->ival, op.loc);
      return call("neg", {e}, op.loc);
    }
    return postfix();
  }

  ExprP postfix() {
    ExprP e = primary();
    while (is("[")) {
      Token open = next();
      auto idx = expr_list("]");
      if (idx.empty()) fail(open.loc, "empty index");
      expect("]");
      for (auto& i : idx) e = index(e, i, open.loc);
    }
    return e;
  }

  ExprP primary() {
    const Token t = peek();
    SourceLoc loc = t.loc;
    if (t.kind == Tok::Int) {
      next();
      std::int64_t v = 0;
      auto r = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (r.ec != std::errc()) fail(loc, "integer literal out of range");
      return int_c(v, loc);
    }
    if (t.kind == Tok::Real) {
      next();
      return real_c(std::stod(t.text), loc);
    }
    if (accept("(")) {
      ExprP e = expr();
      expect(")");
      return e;
    }
    if (accept("[")) {
      if (accept("]")) return array_lit({}, loc);
      ExprP first = expr();
      if (accept("|")) {
        std::string x = ident();
        expect("in");
        ExprP lo = expr();
        expect(":");
        ExprP hi = expr();
        expect("]");
        return comp(first, x, lo, hi, loc);
      }
      std::vector<ExprP> elems{first};
      while (accept(",")) elems.push_back(expr());
      expect("]");
      return array_lit(elems, loc);
    }
    if (accept("target")) {
      expect("(");
      std::vector<StmtP> stmts;
      while (!is(")")) {
        if (peek().kind == Tok::End) fail(peek().loc, "expected ')' but found end of input");
        stmts.push_back(statement());
      }
      expect(")");
      return target(seq(stmts), loc);
    }
    if (accept("phi")) {
      expect("(");
      auto bs = binders();
      expect(")");
      return phi(bs, block(), loc);
    }
    if (t.kind == Tok::Ident && !kKeywords.count(t.text)) {
      next();
      if (accept("(")) {
        auto args = expr_list(")");
        expect(")");
        return call(t.text, args, loc);
      }
      return var(t.text, loc);
    }
    fail(loc, "expected expression but found " + describe(t));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------- printing

int precedence(const ExprP& e) {
  if (e->kind == Expr::Kind::Call) {
    const std::string& f = e->name;
    if (f == "<" || f == ">" || f == "==") return 1;
    if (f == "+" || f == "-") return 2;
    if (f == "*" || f == "/") return 3;
    if (f == "neg") return 4;
  }
  if ((e->kind == Expr::Kind::Real && std::signbit(e->real)) || (e->kind == Expr::Kind::Int && e->ival < 0))
    return 4;
  return 5;
}

bool is_binop(const std::string& f) {
  return f == "<" || f == ">" || f == "==" || f == "+" || f == "-" || f == "*" || f == "/";
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 2, ' '); }

std::string print_expr(const ExprP& e, int indent);

std::string wrap(const ExprP& e, int min_prec, int indent) {
  std::string s = print_expr(e, indent);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

std::string print_stmt(const StmtP& s, int indent);

std::string print_body(const StmtP& s, int indent) {
  auto parts = flatten(s);
  if (parts.empty()) return "{ }";
  std::string out = "{\n";
  for (const auto& p : parts) out += print_stmt(p, indent + 1);
  out += pad(indent) + "}";
  return out;
}

std::string print_lvalue(const LValue& l, int indent) {
  std::string out = l.name;
  for (const auto& i : l.indices) out += "[" + print_expr(i, indent) + "]";
  return out;
}

std::string print_args(const std::vector<ExprP>& args, int indent) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(args[i], indent);
  }
  return out;
}

std::string print_binders(const std::vector<Binder>& bs) {
  std::string out;
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (i) out += ", ";
    out += "int<" + std::to_string(bs[i].K) + "> " + bs[i].name;
  }
  return out;
}

std::string print_expr(const ExprP& e, int indent) {
  switch (e->kind) {
    case Expr::Kind::Var: return e->name;
    case Expr::Kind::Real: return format_real(e->real);
    case Expr::Kind::Int: return std::to_string(e->ival);
    case Expr::Kind::Array: return "[" + print_args(e->args, indent) + "]";
    case Expr::Kind::Index: return wrap(e->args[0], 5, indent) + "[" + print_expr(e->args[1], indent) + "]";
    case Expr::Kind::Call: {
      if (e->name == "neg") return "-" + wrap(e->args[0], 5, indent);
      if (is_binop(e->name) && e->args.size() == 2) {
        int p = precedence(e);
        return wrap(e->args[0], p, indent) + " " + e->name + " " + wrap(e->args[1], p + 1, indent);
      }
      return e->name + "(" + print_args(e->args, indent) + ")";
    }
    case Expr::Kind::Comp:
      return "[" + print_expr(e->args[0], indent) + " | " + e->name + " in " + print_expr(e->args[1], indent) +
             ":" + print_expr(e->args[2], indent) + "]";
    case Expr::Kind::Target: {
      auto parts = flatten(e->body);
      if (parts.empty()) return "target()";
      std::string out = "target(\n";
      for (const auto& p : parts) out += print_stmt(p, indent + 1);
      out += pad(indent) + ")";
      return out;
    }
    case Expr::Kind::Phi: return "phi(" + print_binders(e->binders) + ") " + print_body(e->body, indent);
  }
  return "?";
}

std::string print_stmt(const StmtP& s, int indent) {
  std::string p = pad(indent);
  switch (s->kind) {
    case Stmt::Kind::Skip: return p + "skip;\n";
    case Stmt::Kind::Seq: {
      std::string out;
      for (const auto& part : flatten(s)) out += print_stmt(part, indent);
      return out.empty() ? p + "skip;\n" : out;
    }
    case Stmt::Kind::Assign:
      return p + print_lvalue(s->lhs, indent) + " = " + print_expr(s->expr, indent) + ";\n";
    case Stmt::Kind::Sample:
      return p + print_lvalue(s->lhs, indent) + " ~ " + s->name + "(" + print_args(s->args, indent) + ");\n";
    case Stmt::Kind::Factor: return p + "factor(" + print_expr(s->expr, indent) + ");\n";
    case Stmt::Kind::For:
      return p + "for (" + s->name + " in " + print_expr(s->lo, indent) + ":" + print_expr(s->hi, indent) + ") " +
             print_body(s->s1, indent) + "\n";
    case Stmt::Kind::If: {
      std::string out = p + "if (" + print_expr(s->expr, indent) + ") " + print_body(s->s1, indent);
      if (!flatten(s->s2).empty()) out += " else " + print_body(s->s2, indent);
      return out + "\n";
    }
    case Stmt::Kind::Elim:
    case Stmt::Kind::Gen:
      return p + (s->kind == Stmt::Kind::Elim ? "elim(" : "gen(") + print_binders({{s->name, s->K}}) + ") " +
             print_body(s->s1, indent) + "\n";
  }
  return "";
}

std::string decl_prefix(const GammaEntry& e) {
  std::string out;
  if (e.slot.concrete()) out = e.slot.str() + " ";
  return out + e.type.str() + " ";
}

}  // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, r.ptr);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

ParseResult parse(const std::string& src) {
  ParseResult res;
  try {
    Parser p(lex(src));
    res.program = p.program();
  } catch (const ParseFailure& f) {
    res.diagnostics.push_back(f.diag);
  }
  return res;
}

Program parse_or_throw(const std::string& src) {
  auto r = parse(src);
  if (!r.ok()) {
    const auto& d = r.diagnostics.front();
    throw SlicError(std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message);
  }
  return std::move(*r.program);
}

Program parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SlicError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = parse(ss.str());
  if (!r.ok()) {
    const auto& d = r.diagnostics.front();
    throw SlicError(path + ":" + std::to_string(d.line) + ":" + std::to_string(d.column) + ": " + d.message);
  }
  return std::move(*r.program);
}

std::string pretty(const StmtP& s, int indent) { return print_stmt(s, indent); }
std::string pretty(const ExprP& e) { return print_expr(e, 0); }

std::string pretty(const Program& p) {
  auto stmts = flatten(p.body);
  std::map<std::string, std::size_t> first_site;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    const auto& s = stmts[i];
    if ((s->kind == Stmt::Kind::Assign || s->kind == Stmt::Kind::Sample) && s->lhs.indices.empty())
      first_site.emplace(s->lhs.name, i);
  }
  // Attach declarations greedily in Γ order; the rest go right after the
  // previously attached site so the parsed Γ order is unchanged.
  std::map<std::size_t, std::string> attached;
  std::map<std::size_t, std::vector<std::string>> before;
  std::size_t next_free = 0;
  for (const auto& e : p.gamma.entries()) {
    auto it = first_site.find(e.name);
    if (it != first_site.end() && it->second >= next_free) {
      attached[it->second] = decl_prefix(e);
      next_free = it->second + 1;
    } else {
      before[next_free].push_back(decl_prefix(e) + e.name + ";\n");
    }
  }
  std::string out;
  for (std::size_t i = 0; i <= stmts.size(); ++i) {
    for (const auto& d : before[i]) out += d;
    if (i == stmts.size()) break;
    auto a = attached.find(i);
    out += a != attached.end() ? a->second + print_stmt(stmts[i], 0) : print_stmt(stmts[i], 0);
  }
  if (stmts.empty()) out += "skip;\n";
  return out;
}

}  // namespace slic
