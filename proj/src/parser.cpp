#include "minicog/parser.hpp"

#include <cctype>
#include <map>
#include <set>

namespace minicog {

namespace {

enum class Tok {
  Ident,    // lowercase-initial: variables, tyvars
  UIdent,   // uppercase-initial: type constructors (Unit/Bool/U8/U32 included)
  Int,
  KwFun, KwForeign, KwAbstract, KwLet, KwLetBang, KwIn, KwIf, KwThen, KwElse, KwTrue, KwFalse,
  LParen, RParen, LBrack, RBrack, Comma, Colon, Equals, Arrow, Bang, Pipe,
  Plus, Minus, Star, Slash, Lt, Gt, Le, Ge, EqEq, Ne, AndAnd, OrOr,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  uint32_t ival = 0;
  int line = 1, col = 1;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, line, col); }

  char peek() const { return pos < src.size() ? src[pos] : '\0'; }
  char peek2() const { return pos + 1 < src.size() ? src[pos + 1] : '\0'; }

  char take() {
    char c = src[pos++];
    if (c == '\n') {
      line++;
      col = 1;
    } else {
      col++;
    }
    return c;
  }

  void skip_space() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(peek()))) take();
  }

  static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  Token next() {
    skip_space();
    Token t;
    t.line = line;
    t.col = col;
    if (pos >= src.size()) {
      t.kind = Tok::End;
      return t;
    }
    char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      uint64_t v = 0;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(peek()))) {
        v = v * 10 + (take() - '0');
        if (v > 0xffffffffULL) fail("integer literal out of range");
      }
      t.kind = Tok::Int;
      t.ival = static_cast<uint32_t>(v);
      return t;
    }
    if (ident_start(c)) {
      std::string w;
      while (pos < src.size() && ident_char(peek())) w += take();
      if (w == "fun") t.kind = Tok::KwFun;
      else if (w == "foreign") t.kind = Tok::KwForeign;
      else if (w == "abstract") t.kind = Tok::KwAbstract;
      else if (w == "let") {
        if (peek() == '!') {
          take();
          t.kind = Tok::KwLetBang;
        } else {
          t.kind = Tok::KwLet;
        }
      } else if (w == "in") t.kind = Tok::KwIn;
      else if (w == "if") t.kind = Tok::KwIf;
      else if (w == "then") t.kind = Tok::KwThen;
      else if (w == "else") t.kind = Tok::KwElse;
      else if (w == "True") t.kind = Tok::KwTrue;
      else if (w == "False") t.kind = Tok::KwFalse;
      else if (std::isupper(static_cast<unsigned char>(w[0]))) t.kind = Tok::UIdent;
      else t.kind = Tok::Ident;
      t.text = std::move(w);
      return t;
    }
    take();
    switch (c) {
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      case '[': t.kind = Tok::LBrack; return t;
      case ']': t.kind = Tok::RBrack; return t;
      case ',': t.kind = Tok::Comma; return t;
      case ':': t.kind = Tok::Colon; return t;
      case '!': t.kind = Tok::Bang; return t;
      case '|':
        if (peek() == '|') {
          take();
          t.kind = Tok::OrOr;
        } else {
          t.kind = Tok::Pipe;
        }
        return t;
      case '&':
        if (peek() == '&') {
          take();
          t.kind = Tok::AndAnd;
          return t;
        }
        fail("stray '&'");
      case '+': t.kind = Tok::Plus; return t;
      case '-':
        if (peek() == '>') {
          take();
          t.kind = Tok::Arrow;
        } else {
          t.kind = Tok::Minus;
        }
        return t;
      case '*': t.kind = Tok::Star; return t;
      case '/':
        if (peek() == '=') {
          take();
          t.kind = Tok::Ne;
        } else {
          t.kind = Tok::Slash;
        }
        return t;
      case '<':
        if (peek() == '=') {
          take();
          t.kind = Tok::Le;
        } else {
          t.kind = Tok::Lt;
        }
        return t;
      case '>':
        if (peek() == '=') {
          take();
          t.kind = Tok::Ge;
        } else {
          t.kind = Tok::Gt;
        }
        return t;
      case '=':
        if (peek() == '=') {
          take();
          t.kind = Tok::EqEq;
        } else {
          t.kind = Tok::Equals;
        }
        return t;
      default:
        fail(std::string("unexpected character '") + c + "'");
    }
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;

  explicit Parser(const std::string& src) {
    Lexer lx(src);
    for (;;) {
      Token t = lx.next();
      bool end = t.kind == Tok::End;
      toks.push_back(std::move(t));
      if (end) break;
    }
  }

  const Token& peek(size_t ahead = 0) const {
    size_t i = at + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }

  Token take() { return toks[at < toks.size() - 1 ? at++ : at]; }

  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string where = t.kind == Tok::End ? " (end of input)" : " near '" + describe(t) + "'";
    throw ParseError(msg + where, t.line, t.col);
  }

  static std::string describe(const Token& t) {
    if (!t.text.empty()) return t.text;
    if (t.kind == Tok::Int) return std::to_string(t.ival);
    return "symbol";
  }

  Token expect(Tok k, const std::string& what) {
    if (peek().kind != k) fail("expected " + what);
    return take();
  }

  bool accept(Tok k) {
    if (peek().kind == k) {
      take();
      return true;
    }
    return false;
  }

  // -- types ----------------------------------------------------------------

  bool at_type_atom() const {
    Tok k = peek().kind;
    return k == Tok::UIdent || k == Tok::Ident || k == Tok::LParen;
  }

  Type parse_type() {
    Type lhs = parse_type_app();
    if (accept(Tok::Arrow)) return Type::fun(std::move(lhs), parse_type());
    return lhs;
  }

  Type parse_type_app() {
    if (peek().kind == Tok::UIdent) {
      const std::string& w = peek().text;
      if (w != "Unit" && w != "Bool" && w != "U8" && w != "U32") {
        Token name = take();
        std::vector<Type> args;
        while (at_type_atom()) args.push_back(parse_type_bangatom());
        Type t = Type::abs(name.text, std::move(args), false);
        while (accept(Tok::Bang)) t = bang_type(t);
        return t;
      }
    }
    return parse_type_bangatom();
  }

  Type parse_type_bangatom() {
    Type t = parse_type_atom();
    while (accept(Tok::Bang)) t = bang_type(t);
    return t;
  }

  Type parse_type_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::UIdent: {
        Token w = take();
        if (w.text == "Unit") return Type::unit();
        if (w.text == "Bool") return Type::boolean();
        if (w.text == "U8") return Type::u8();
        if (w.text == "U32") return Type::u32();
        return Type::abs(w.text, {}, false);  // 0-ary constructor in argument position
      }
      case Tok::Ident: {
        Token w = take();
        return Type::var(w.text);
      }
      case Tok::LParen: {
        take();
        std::vector<Type> parts;
        parts.push_back(parse_type());
        while (accept(Tok::Comma)) parts.push_back(parse_type());
        expect(Tok::RParen, "')'");
        if (parts.size() == 1) return parts[0];
        return Type::prod(std::move(parts));
      }
      default:
        fail("expected a type");
    }
  }

  // -- patterns ---------------------------------------------------------------

  Pattern parse_pattern() {
    if (peek().kind == Tok::Ident) return Pattern::var(take().text);
    if (peek().kind == Tok::LParen) {
      take();
      std::vector<Pattern> parts;
      parts.push_back(parse_pattern());
      while (accept(Tok::Comma)) parts.push_back(parse_pattern());
      expect(Tok::RParen, "')'");
      if (parts.size() == 1) return parts[0];
      return Pattern::tup(std::move(parts));
    }
    fail("expected a pattern");
  }

  // -- expressions ------------------------------------------------------------

  Expr parse_expr() {
    const Token& t = peek();
    if (t.kind == Tok::KwLet) {
      take();
      Pattern p = parse_pattern();
      expect(Tok::Equals, "'='");
      Expr rhs = parse_expr();
      expect(Tok::KwIn, "'in'");
      Expr body = parse_expr();
      Expr e = Expr::let(std::move(p), std::move(rhs), std::move(body));
      e.line = t.line;
      e.col = t.col;
      return e;
    }
    if (t.kind == Tok::KwLetBang) {
      take();
      expect(Tok::LParen, "'('");
      std::vector<std::string> vars;
      while (peek().kind == Tok::Ident) vars.push_back(take().text);
      expect(Tok::RParen, "')'");
      Pattern p = parse_pattern();
      expect(Tok::Equals, "'='");
      Expr rhs = parse_expr();
      expect(Tok::KwIn, "'in'");
      Expr body = parse_expr();
      Expr e = Expr::bang(std::move(vars), std::move(p), std::move(rhs), std::move(body));
      e.line = t.line;
      e.col = t.col;
      return e;
    }
    if (t.kind == Tok::KwIf) {
      take();
      if (peek().kind == Tok::Pipe) return parse_multiway_if(t);
      Expr c = parse_expr();
      expect(Tok::KwThen, "'then'");
      Expr yes = parse_expr();
      expect(Tok::KwElse, "'else'");
      Expr no = parse_expr();
      Expr e = Expr::cond(std::move(c), std::move(yes), std::move(no));
      e.line = t.line;
      e.col = t.col;
      return e;
    }
    return parse_binop(0);
  }

  // "if | c1 -> e1 | c2 -> e2 | else -> e3" desugars to nested conditionals.
  Expr parse_multiway_if(const Token& kw) {
    std::vector<std::pair<Expr, Expr>> arms;
    Expr fallback = Expr::lit_unit();
    bool have_fallback = false;
    while (accept(Tok::Pipe)) {
      if (accept(Tok::KwElse)) {
        expect(Tok::Arrow, "'->'");
        fallback = parse_expr();
        have_fallback = true;
        break;
      }
      Expr c = parse_expr();
      expect(Tok::Arrow, "'->'");
      Expr e = parse_expr();
      arms.emplace_back(std::move(c), std::move(e));
    }
    if (!have_fallback) fail("multi-way if needs an '| else ->' arm");
    if (arms.empty()) fail("multi-way if needs at least one guarded arm");
    Expr out = std::move(fallback);
    for (auto it = arms.rbegin(); it != arms.rend(); ++it)
      out = Expr::cond(std::move(it->first), std::move(it->second), std::move(out));
    out.line = kw.line;
    out.col = kw.col;
    return out;
  }

  static int prec_of(Tok k) {
    switch (k) {
      case Tok::OrOr: return 1;
      case Tok::AndAnd: return 2;
      case Tok::Lt: case Tok::Gt: case Tok::Le: case Tok::Ge: case Tok::EqEq: case Tok::Ne:
        return 3;
      case Tok::Plus: case Tok::Minus: return 4;
      case Tok::Star: case Tok::Slash: return 5;
      default: return -1;
    }
  }

  static BinOp op_of(Tok k) {
    switch (k) {
      case Tok::OrOr: return BinOp::Or;
      case Tok::AndAnd: return BinOp::And;
      case Tok::Lt: return BinOp::Lt;
      case Tok::Gt: return BinOp::Gt;
      case Tok::Le: return BinOp::Le;
      case Tok::Ge: return BinOp::Ge;
      case Tok::EqEq: return BinOp::Eq;
      case Tok::Ne: return BinOp::Ne;
      case Tok::Plus: return BinOp::Add;
      case Tok::Minus: return BinOp::Sub;
      case Tok::Star: return BinOp::Mul;
      default: return BinOp::Div;
    }
  }

  Expr parse_binop(int min_prec) {
    Expr lhs = parse_app();
    for (;;) {
      int p = prec_of(peek().kind);
      if (p < 0 || p < min_prec) return lhs;
      Token op = take();
      Expr rhs = parse_binop(p + 1);
      Expr e = Expr::prim(op_of(op.kind), std::move(lhs), std::move(rhs));
      e.line = op.line;
      e.col = op.col;
      lhs = std::move(e);
    }
  }

  bool at_expr_atom() const {
    Tok k = peek().kind;
    return k == Tok::Int || k == Tok::KwTrue || k == Tok::KwFalse || k == Tok::Ident ||
           k == Tok::LParen;
  }

  Expr parse_app() {
    if (peek().kind == Tok::Ident &&
        (peek(1).kind == Tok::LBrack || starts_atom_after_name())) {
      Token name = take();
      std::vector<Type> tys;
      if (accept(Tok::LBrack)) {
        tys.push_back(parse_type());
        while (accept(Tok::Comma)) tys.push_back(parse_type());
        expect(Tok::RBrack, "']'");
      }
      Expr arg = parse_atom();
      Expr e = Expr::app(name.text, std::move(tys), std::move(arg));
      e.line = name.line;
      e.col = name.col;
      return e;
    }
    return parse_atom();
  }

  bool starts_atom_after_name() const {
    Tok k = peek(1).kind;
    return k == Tok::Int || k == Tok::KwTrue || k == Tok::KwFalse || k == Tok::Ident ||
           k == Tok::LParen;
  }

  Expr parse_atom() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Int: {
        Token n = take();
        Expr e = Expr::lit_u32(n.ival);
        e.line = n.line;
        e.col = n.col;
        return e;
      }
      case Tok::KwTrue: take(); return Expr::lit_bool(true);
      case Tok::KwFalse: take(); return Expr::lit_bool(false);
      case Tok::Ident: {
        Token n = take();
        Expr e = Expr::variable(n.text);
        e.line = n.line;
        e.col = n.col;
        return e;
      }
      case Tok::LParen: {
        take();
        if (accept(Tok::RParen)) return Expr::lit_unit();
        std::vector<Expr> parts;
        parts.push_back(parse_expr());
        while (accept(Tok::Comma)) parts.push_back(parse_expr());
        expect(Tok::RParen, "')'");
        if (parts.size() == 1) return parts[0];
        return Expr::tuple(std::move(parts));
      }
      default:
        fail("expected an expression");
    }
  }

  // -- declarations -----------------------------------------------------------

  Program parse_program() {
    Program p;
    for (;;) {
      const Token& t = peek();
      if (t.kind == Tok::End) break;
      if (t.kind == Tok::KwAbstract) {
        take();
        Token name = expect(Tok::UIdent, "type constructor name");
        TypeDecl d;
        d.name = name.text;
        while (peek().kind == Tok::Ident) d.tyvars.push_back(take().text);
        p.typedefs.push_back(std::move(d));
      } else if (t.kind == Tok::KwForeign) {
        take();
        Token name = expect(Tok::Ident, "function name");
        expect(Tok::Colon, "':'");
        Type ty = parse_type();
        if (ty.tag != TyTag::Fun) fail("foreign declaration needs a function type");
        FunDef f;
        f.name = name.text;
        f.base_name = name.text;
        f.arg_type = ty.args[0];
        f.ret_type = ty.args[1];
        collect_tyvars(f.arg_type, f.tyvars);
        collect_tyvars(f.ret_type, f.tyvars);
        p.fundefs.push_back(std::move(f));
      } else if (t.kind == Tok::KwFun) {
        take();
        Token name = expect(Tok::Ident, "function name");
        FunDef f;
        f.name = name.text;
        f.base_name = name.text;
        while (peek().kind == Tok::Ident && peek(1).kind != Tok::LParen) {
          // tyvars are the identifiers before the parenthesised parameter
          f.tyvars.push_back(take().text);
        }
        if (peek().kind == Tok::Ident) f.tyvars.push_back(take().text);
        expect(Tok::LParen, "'('");
        f.param = parse_pattern();
        expect(Tok::Colon, "':'");
        f.arg_type = parse_type();
        expect(Tok::RParen, "')'");
        expect(Tok::Arrow, "'->'");
        f.ret_type = parse_type();
        expect(Tok::Equals, "'='");
        f.body = parse_expr();
        p.fundefs.push_back(std::move(f));
      } else {
        fail("expected a declaration");
      }
    }
    return p;
  }

  static void collect_tyvars(const Type& t, std::vector<std::string>& out) {
    if (t.tag == TyTag::Var) {
      for (const std::string& v : out)
        if (v == t.name) return;
      out.push_back(t.name);
      return;
    }
    for (const Type& a : t.args) collect_tyvars(a, out);
  }
};

// ---------------------------------------------------------------------------
// name resolution

struct Resolver {
  const Program& prog;

  [[noreturn]] void fail(const std::string& msg, int line, int col) const {
    throw ParseError(msg, line, col);
  }

  void check_type(const Type& t, const std::vector<std::string>& tyvars, int line, int col) const {
    switch (t.tag) {
      case TyTag::Var: {
        for (const std::string& v : tyvars)
          if (v == t.name) return;
        fail("unbound type variable '" + t.name + "'", line, col);
      }
      case TyTag::Abs: {
        const TypeDecl* d = prog.find_type(t.name);
        if (!d) fail("unbound type constructor '" + t.name + "'", line, col);
        if (d->tyvars.size() != t.args.size())
          fail("type constructor '" + t.name + "' expects " + std::to_string(d->tyvars.size()) +
                   " arguments",
               line, col);
        break;
      }
      default:
        break;
    }
    for (const Type& a : t.args) check_type(a, tyvars, line, col);
  }

  void check_pattern(const Pattern& p, std::set<std::string>& seen, int line, int col) const {
    if (!p.tuple) {
      if (!seen.insert(p.name).second)
        fail("duplicate name '" + p.name + "' in pattern", line, col);
      return;
    }
    for (const Pattern& q : p.parts) check_pattern(q, seen, line, col);
  }

  void check_expr(const Expr& e, std::set<std::string> scope,
                  const std::vector<std::string>& tyvars) const {
    switch (e.tag) {
      case ExTag::Lit:
        return;
      case ExTag::Var:
        if (!scope.count(e.name) && !prog.find(e.name))
          fail("unbound name '" + e.name + "'", e.line, e.col);
        return;
      case ExTag::App: {
        if (!prog.find(e.name)) fail("unbound function '" + e.name + "'", e.line, e.col);
        for (const Type& t : e.tyargs) check_type(t, tyvars, e.line, e.col);
        check_expr(e.kids[0], scope, tyvars);
        return;
      }
      case ExTag::Let: {
        check_expr(e.kids[0], scope, tyvars);
        std::set<std::string> names;
        check_pattern(e.pat, names, e.line, e.col);
        std::set<std::string> inner = scope;
        inner.insert(names.begin(), names.end());
        check_expr(e.kids[1], std::move(inner), tyvars);
        return;
      }
      case ExTag::Bang: {
        for (const std::string& v : e.observed)
          if (!scope.count(v)) fail("unbound name '" + v + "' in let! list", e.line, e.col);
        check_expr(e.kids[0], scope, tyvars);
        std::set<std::string> names;
        check_pattern(e.pat, names, e.line, e.col);
        std::set<std::string> inner = scope;
        inner.insert(names.begin(), names.end());
        check_expr(e.kids[1], std::move(inner), tyvars);
        return;
      }
      default:
        for (const Expr& k : e.kids) check_expr(k, scope, tyvars);
        return;
    }
  }

  void run() const {
    std::set<std::string> tynames, funnames;
    for (const TypeDecl& d : prog.typedefs)
      if (!tynames.insert(d.name).second) fail("duplicate type '" + d.name + "'", 0, 0);
    for (const FunDef& f : prog.fundefs)
      if (!funnames.insert(f.name).second) fail("duplicate definition '" + f.name + "'", 0, 0);
    for (const FunDef& f : prog.fundefs) {
      check_type(f.arg_type, f.tyvars, 0, 0);
      check_type(f.ret_type, f.tyvars, 0, 0);
      if (f.body) {
        std::set<std::string> names;
        check_pattern(f.param, names, f.body->line, f.body->col);
        check_expr(*f.body, names, f.tyvars);
      }
    }
  }
};

// ---------------------------------------------------------------------------
// pretty printer

// Expression precedence levels; see prec_of above. 0 is an open form
// (let/if), 6 application, 7 atoms.
void print_expr(const Expr& e, int ctx, int indent, std::string& out);

void newline(int indent, std::string& out) {
  out += "\n";
  out.append(static_cast<size_t>(indent) * 2, ' ');
}

void print_pattern(const Pattern& p, std::string& out) {
  if (!p.tuple) {
    out += p.name;
    return;
  }
  out += "(";
  for (size_t i = 0; i < p.parts.size(); ++i) {
    if (i) out += ", ";
    print_pattern(p.parts[i], out);
  }
  out += ")";
}

int op_prec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::Lt: case BinOp::Gt: case BinOp::Le: case BinOp::Ge:
    case BinOp::Eq: case BinOp::Ne: return 3;
    case BinOp::Add: case BinOp::Sub: return 4;
    case BinOp::Mul: case BinOp::Div: return 5;
  }
  return 5;
}

void print_expr(const Expr& e, int ctx, int indent, std::string& out) {
  switch (e.tag) {
    case ExTag::Lit:
      switch (e.lit.kind) {
        case PrimKind::Unit: out += "()"; return;
        case PrimKind::Bool: out += e.lit.bits ? "True" : "False"; return;
        case PrimKind::U8:
        case PrimKind::U32: out += std::to_string(e.lit.bits); return;
      }
      return;
    case ExTag::Var:
      out += e.name;
      return;
    case ExTag::Tuple: {
      out += "(";
      for (size_t i = 0; i < e.kids.size(); ++i) {
        if (i) out += ", ";
        print_expr(e.kids[i], 0, indent, out);
      }
      out += ")";
      return;
    }
    case ExTag::App: {
      bool paren = ctx > 6;
      if (paren) out += "(";
      out += e.name;
      if (!e.tyargs.empty()) {
        out += "[";
        for (size_t i = 0; i < e.tyargs.size(); ++i) {
          if (i) out += ", ";
          out += to_string(e.tyargs[i]);
        }
        out += "]";
      }
      out += " ";
      print_expr(e.kids[0], 7, indent, out);
      if (paren) out += ")";
      return;
    }
    case ExTag::Prim: {
      int p = op_prec(e.op);
      bool paren = ctx > p;
      if (paren) out += "(";
      print_expr(e.kids[0], p, indent, out);
      out += " ";
      out += spelling(e.op);
      out += " ";
      print_expr(e.kids[1], p + 1, indent, out);
      if (paren) out += ")";
      return;
    }
    case ExTag::If: {
      bool paren = ctx > 0;
      if (paren) out += "(";
      out += "if ";
      print_expr(e.kids[0], 1, indent, out);
      out += " then ";
      print_expr(e.kids[1], 0, indent, out);
      out += " else ";
      print_expr(e.kids[2], 0, indent, out);
      if (paren) out += ")";
      return;
    }
    case ExTag::Let:
    case ExTag::Bang: {
      bool paren = ctx > 0;
      if (paren) out += "(";
      if (e.tag == ExTag::Bang) {
        out += "let! (";
        for (size_t i = 0; i < e.observed.size(); ++i) {
          if (i) out += " ";
          out += e.observed[i];
        }
        out += ") ";
      } else {
        out += "let ";
      }
      print_pattern(e.pat, out);
      out += " = ";
      print_expr(e.kids[0], 0, indent, out);
      out += " in";
      newline(indent + 1, out);
      print_expr(e.kids[1], 0, indent + 1, out);
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace

Program parse_program(const std::string& text) {
  Parser parser(text);
  Program p = parser.parse_program();
  Resolver{p}.run();
  return p;
}

std::string pretty_print(const Expr& e) {
  std::string out;
  print_expr(e, 0, 1, out);
  return out;
}

std::string pretty_print(const Program& p) {
  std::string out;
  for (const TypeDecl& d : p.typedefs) {
    out += "abstract " + d.name;
    for (const std::string& v : d.tyvars) out += " " + v;
    out += "\n";
  }
  if (!p.typedefs.empty() && !p.fundefs.empty()) out += "\n";
  for (const FunDef& f : p.fundefs) {
    if (f.foreign()) {
      out += "foreign " + f.name + " : " + to_string(f.fun_type()) + "\n";
      continue;
    }
    out += "fun " + f.name;
    for (const std::string& v : f.tyvars) out += " " + v;
    out += " (";
    print_pattern(f.param, out);
    out += " : " + to_string(f.arg_type) + ") -> " + to_string(f.ret_type) + " =";
    newline(1, out);
    print_expr(*f.body, 0, 1, out);
    out += "\n\n";
  }
  while (!out.empty() && out.back() == '\n') out.pop_back();
  if (!out.empty()) out += "\n";
  return out;
}

}  // namespace minicog
