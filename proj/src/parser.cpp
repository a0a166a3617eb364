#include "contraver/parser.hpp"

#include <array>

namespace contraver::cvl {

namespace {

constexpr std::array<std::string_view, 9> kBuiltins = {
    "count", "length", "interval", "extended", "bag_extended", "to_bag", "occ", "union", "empty_bag",
};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::string file, bool lenient = false)
      : toks_(tokens), file_(std::move(file)), lenient_(lenient) {}

  Program program() {
    Program p;
    p.file = file_;
    if (at_end()) fail({"const", "ghost", "struct", "routine"}, "a program needs at least one declaration");
    while (!at_end()) {
      if (peek().is_keyword("const")) {
        p.constants.push_back(const_decl());
      } else if (peek().is_keyword("ghost")) {
        p.ghosts.push_back(ghost_function());
      } else if (peek().is_keyword("struct")) {
        p.structs.push_back(struct_def());
      } else if (peek().is_keyword("routine")) {
        p.routines.push_back(routine());
      } else {
        fail({"const", "ghost", "struct", "routine"}, "expected a declaration");
      }
    }
    return p;
  }

  Expr whole_expression() {
    Expr e = expr();
    if (!at_end()) fail({"end of input"}, "unexpected token after expression");
    return e;
  }

  std::vector<Stmt> whole_statements() {
    auto body = statements();
    if (!at_end()) fail({"end of input"}, "unexpected token after statements");
    return body;
  }

 private:
  const std::vector<Token>& toks_;
  std::string file_;
  bool lenient_ = false;
  std::size_t pos_ = 0;

  // ---- token helpers ----------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }

  const Token& peek(std::size_t ahead = 0) const {
    static const Token eof{TokenKind::Punctuation, "", {}};
    return pos_ + ahead < toks_.size() ? toks_[pos_ + ahead] : eof;
  }

  SourceSpan here() const {
    if (!at_end()) return toks_[pos_].span;
    SourceSpan s;
    s.file = file_;
    if (!toks_.empty()) {
      s = toks_.back().span;
      s.start_line = s.end_line;
      s.start_col = s.end_col;
      s.begin = s.end;
    }
    return s;
  }

  SourceSpan last_span() const { return pos_ > 0 ? toks_[pos_ - 1].span : here(); }

  SourceSpan span_since(const SourceSpan& start) const { return SourceSpan::cover(start, last_span()); }

  [[noreturn]] void fail(std::vector<std::string> expected, const std::string& message) const {
    std::string found = at_end() ? "end of input" : "'" + peek().lexeme + "'";
    std::string text = message + " (found " + found + "; expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) text += ", ";
      text += expected[i];
    }
    text += ")";
    throw ParseError(here(), text, std::move(expected));
  }

  bool accept_keyword(std::string_view k) {
    if (!at_end() && peek().is_keyword(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_op(std::string_view op) {
    if (!at_end() && peek().is_op(op)) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token& expect_keyword(std::string_view k) {
    if (at_end() || !peek().is_keyword(k)) fail({std::string(k)}, "expected keyword");
    return toks_[pos_++];
  }

  const Token& expect_op(std::string_view op) {
    if (at_end() || !peek().is_op(op)) fail({"'" + std::string(op) + "'"}, "expected symbol");
    return toks_[pos_++];
  }

  const Token& expect_ident() {
    if (at_end() || peek().kind != TokenKind::Identifier) fail({"identifier"}, "expected identifier");
    return toks_[pos_++];
  }

  // `(` or `[` continues an expression only on the line where the previous
  // token ends, so a new clause may start with either.
  bool adjacent_op(std::string_view op) const {
    return !at_end() && peek().is_op(op) && pos_ > 0 &&
           toks_[pos_ - 1].span.end_line == peek().span.start_line;
  }

  // ---- declarations -----------------------------------------------------

  ConstDecl const_decl() {
    SourceSpan start = expect_keyword("const").span;
    ConstDecl c;
    c.name = expect_ident().lexeme;
    expect_op("=");
    bool negative = accept_op("-");
    if (at_end() || peek().kind != TokenKind::IntLiteral) fail({"integer literal"}, "expected constant value");
    c.value = std::stoll(toks_[pos_++].lexeme);
    if (negative) c.value = -c.value;
    c.span = span_since(start);
    return c;
  }

  Type type() {
    if (accept_keyword("INT")) return Type::integer();
    if (accept_keyword("BOOL")) return Type::boolean();
    if (accept_keyword("SEQ")) return Type::seq();
    if (accept_keyword("BAG")) return Type::bag();
    if (!at_end() && peek().kind == TokenKind::Identifier) return Type::structure(toks_[pos_++].lexeme);
    fail({"INT", "BOOL", "SEQ", "BAG", "struct name"}, "expected a type");
  }

  // groups like `inout a, b: SEQ, i: INT`
  std::vector<Param> params(std::string_view closer, bool allow_inout) {
    std::vector<Param> out;
    while (!at_end() && !peek().is_op(closer)) {
      bool inout = allow_inout && accept_keyword("inout");
      std::vector<Token> names{expect_ident()};
      while (accept_op(",")) names.push_back(expect_ident());
      expect_op(":");
      Type t = type();
      for (const auto& n : names) out.push_back(Param{n.lexeme, t, inout, n.span});
      if (!accept_op(",") && !accept_op(";")) break;
    }
    return out;
  }

  GhostFunction ghost_function() {
    SourceSpan start = expect_keyword("ghost").span;
    expect_keyword("function");
    GhostFunction g;
    g.name = expect_ident().lexeme;
    expect_op("(");
    g.params = params(")", false);
    expect_op(")");
    expect_op(":");
    g.return_type = type();
    expect_op("=");
    g.body = expr();
    g.span = span_since(start);
    return g;
  }

  StructDef struct_def() {
    SourceSpan start = expect_keyword("struct").span;
    StructDef s;
    s.name = expect_ident().lexeme;
    expect_op("{");
    s.fields = params("}", false);
    expect_op("}");
    if (accept_keyword("invariant")) s.invariants = clauses();
    s.span = span_since(start);
    return s;
  }

  Routine routine() {
    SourceSpan start = expect_keyword("routine").span;
    Routine r;
    r.name = expect_ident().lexeme;
    expect_op("(");
    r.params = params(")", true);
    expect_op(")");
    if (accept_op(":")) r.return_type = type();
    if (accept_keyword("require")) r.preconditions = clauses();
    if (!at_end() && peek().is_keyword("modify")) {
      ++pos_;
      const Token& first = expect_ident();
      r.modifies.push_back(Ident{first.lexeme, first.span});
      SourceSpan ms = first.span;
      while (accept_op(",")) {
        const Token& n = expect_ident();
        r.modifies.push_back(Ident{n.lexeme, n.span});
      }
      r.modify_span = span_since(ms);
    }
    if (accept_keyword("variant")) r.variant = expr();
    expect_keyword("do");
    r.body = statements();
    expect_keyword("end");
    if (accept_keyword("ensure")) r.postconditions = clauses();
    r.span = span_since(start);
    return r;
  }

  // ---- clauses ----------------------------------------------------------

  bool starts_expression() const {
    if (at_end()) return false;
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Identifier:
      case TokenKind::IntLiteral:
        return true;
      case TokenKind::Keyword:
        return t.lexeme == "not" || t.lexeme == "true" || t.lexeme == "false" || t.lexeme == "Result" ||
               t.lexeme == "old" || t.lexeme == "forall" || t.lexeme == "exists" || t.lexeme == "if";
      default:
        return t.lexeme == "(" || t.lexeme == "[" || t.lexeme == "-";
    }
  }

  std::vector<LabeledExpr> clauses() {
    std::vector<LabeledExpr> out;
    while (true) {
      while (accept_op(";")) {
      }
      if (!starts_expression()) break;
      LabeledExpr c;
      SourceSpan start = here();
      if (peek().kind == TokenKind::Identifier && peek(1).is_op(":")) {
        c.label = toks_[pos_].lexeme;
        pos_ += 2;
      }
      c.expr = expr();
      c.span = span_since(start);
      out.push_back(std::move(c));
    }
    return out;
  }

  // ---- statements -------------------------------------------------------

  std::vector<Stmt> statements() {
    std::vector<Stmt> out;
    while (true) {
      while (accept_op(";")) {
      }
      if (at_end() || peek().is_keyword("end") || peek().is_keyword("else")) break;
      out.push_back(statement());
    }
    return out;
  }

  Stmt statement() {
    SourceSpan start = here();
    Stmt s;
    if (accept_keyword("if")) {
      s.kind = StmtKind::If;
      s.value = expr();
      expect_keyword("then");
      s.then_body = statements();
      if (accept_keyword("else")) s.else_body = statements();
      expect_keyword("end");
    } else if (accept_keyword("while")) {
      s.kind = StmtKind::While;
      s.value = expr();
      if (accept_keyword("invariant")) s.invariants = clauses();
      if (!lenient_ || peek().is_keyword("variant")) {
        expect_keyword("variant");
        s.variant = expr();
      }
      expect_keyword("do");
      s.then_body = statements();
      expect_keyword("end");
    } else if (accept_keyword("check")) {
      s.kind = StmtKind::Check;
      s.value = expr();
      expect_keyword("end");
    } else if (accept_keyword("use_invariant")) {
      s.kind = StmtKind::UseInvariant;
      s.target = expect_ident().lexeme;
    } else if (accept_keyword("Result")) {
      s.kind = StmtKind::Assign;
      s.target = "Result";
      expect_op(":=");
      s.value = expr();
    } else if (!at_end() && peek().kind == TokenKind::Identifier) {
      const Token& name = toks_[pos_++];
      if (adjacent_op("(")) {
        s.kind = StmtKind::Call;
        s.callee = name.lexeme;
        s.args = call_args();
      } else {
        s.kind = StmtKind::Assign;
        s.target = name.lexeme;
        if (accept_op(".")) s.target_field = expect_ident().lexeme;
        expect_op(":=");
        s.value = expr();
      }
    } else {
      fail({"if", "while", "check", "use_invariant", "Result", "identifier"}, "expected a statement");
    }
    s.span = span_since(start);
    return s;
  }

  // ---- expressions ------------------------------------------------------

  static Expr node(ExprKind kind, SourceSpan span) {
    Expr e;
    e.kind = kind;
    e.span = std::move(span);
    return e;
  }

  static Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e = node(ExprKind::Binary, SourceSpan::cover(lhs.span, rhs.span));
    e.binary = op;
    e.args.push_back(std::move(lhs));
    e.args.push_back(std::move(rhs));
    return e;
  }

  Expr expr() { return implies(); }

  Expr implies() {
    Expr lhs = disjunction();
    if (accept_keyword("implies")) return binary(BinaryOp::Implies, std::move(lhs), implies());
    return lhs;
  }

  Expr disjunction() {
    Expr lhs = conjunction();
    while (accept_keyword("or")) lhs = binary(BinaryOp::Or, std::move(lhs), conjunction());
    return lhs;
  }

  Expr conjunction() {
    Expr lhs = negation();
    while (accept_keyword("and")) lhs = binary(BinaryOp::And, std::move(lhs), negation());
    return lhs;
  }

  Expr negation() {
    SourceSpan start = here();
    if (accept_keyword("not")) {
      Expr e = node(ExprKind::Unary, start);
      e.unary = UnaryOp::Not;
      e.args.push_back(negation());
      e.span = span_since(start);
      return e;
    }
    return comparison();
  }

  std::optional<BinaryOp> comparison_op() const {
    if (at_end() || peek().kind != TokenKind::Operator) return std::nullopt;
    const std::string& l = peek().lexeme;
    if (l == "=") return BinaryOp::Eq;
    if (l == "/=") return BinaryOp::Ne;
    if (l == "<") return BinaryOp::Lt;
    if (l == "<=") return BinaryOp::Le;
    if (l == ">") return BinaryOp::Gt;
    if (l == ">=") return BinaryOp::Ge;
    return std::nullopt;
  }

  Expr comparison() {
    Expr lhs = additive();
    if (auto op = comparison_op()) {
      ++pos_;
      Expr e = binary(*op, std::move(lhs), additive());
      if (comparison_op()) fail({"and", "or", ")"}, "comparisons do not chain");
      return e;
    }
    return lhs;
  }

  Expr additive() {
    Expr lhs = multiplicative();
    while (true) {
      if (accept_op("+")) {
        lhs = binary(BinaryOp::Add, std::move(lhs), multiplicative());
      } else if (accept_op("-")) {
        lhs = binary(BinaryOp::Sub, std::move(lhs), multiplicative());
      } else {
        return lhs;
      }
    }
  }

  Expr multiplicative() {
    Expr lhs = unary();
    while (true) {
      if (accept_op("*")) {
        lhs = binary(BinaryOp::Mul, std::move(lhs), unary());
      } else if (accept_op("//")) {
        lhs = binary(BinaryOp::Div, std::move(lhs), unary());
      } else if (accept_op("%")) {
        lhs = binary(BinaryOp::Mod, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    SourceSpan start = here();
    if (accept_op("-")) {
      Expr e = node(ExprKind::Unary, start);
      e.unary = UnaryOp::Neg;
      e.args.push_back(unary());
      e.span = span_since(start);
      return e;
    }
    return postfix();
  }

  std::vector<Expr> call_args() {
    expect_op("(");
    std::vector<Expr> out;
    if (!accept_op(")")) {
      out.push_back(expr());
      while (accept_op(",")) out.push_back(expr());
      expect_op(")");
    }
    return out;
  }

  Expr postfix() {
    SourceSpan start = here();
    Expr base = primary();
    while (true) {
      if (adjacent_op("[")) {
        ++pos_;
        Expr e = node(ExprKind::Index, start);
        e.args.push_back(std::move(base));
        e.args.push_back(expr());
        expect_op("]");
        e.span = span_since(start);
        base = std::move(e);
      } else if (accept_op(".")) {
        std::string member = expect_ident().lexeme;
        bool has_args = adjacent_op("(");
        if (has_args || is_builtin_name(member)) {
          Expr e = node(ExprKind::Apply, start);
          e.name = std::move(member);
          e.args.push_back(std::move(base));
          if (has_args) {
            for (auto& a : call_args()) e.args.push_back(std::move(a));
          }
          e.span = span_since(start);
          base = std::move(e);
        } else {
          Expr e = node(ExprKind::Field, start);
          e.name = std::move(member);
          e.args.push_back(std::move(base));
          e.span = span_since(start);
          base = std::move(e);
        }
      } else {
        return base;
      }
    }
  }

  Expr primary() {
    SourceSpan start = here();
    if (at_end()) fail({"expression"}, "unexpected end of input");
    const Token& t = peek();
    if (t.kind == TokenKind::IntLiteral) {
      ++pos_;
      Expr e = node(ExprKind::IntLit, t.span);
      e.int_value = std::stoll(t.lexeme);
      return e;
    }
    if (t.is_keyword("true") || t.is_keyword("false")) {
      ++pos_;
      Expr e = node(ExprKind::BoolLit, t.span);
      e.bool_value = t.lexeme == "true";
      return e;
    }
    if (accept_keyword("Result")) return node(ExprKind::Result, last_span());
    if (accept_keyword("old")) {
      Expr e = node(ExprKind::Old, start);
      e.args.push_back(postfix());
      e.span = span_since(start);
      return e;
    }
    if (t.kind == TokenKind::Identifier) {
      ++pos_;
      if (adjacent_op("(")) {
        Expr e = node(ExprKind::Apply, start);
        e.name = t.lexeme;
        e.args = call_args();
        e.span = span_since(start);
        return e;
      }
      // a bare `empty_bag` is the nullary builtin
      Expr e = node(t.lexeme == "empty_bag" ? ExprKind::Apply : ExprKind::Var, t.span);
      e.name = t.lexeme;
      return e;
    }
    if (accept_op("(")) {
      Expr e = expr();
      expect_op(")");
      return e;
    }
    if (accept_op("[")) {
      Expr e = node(ExprKind::SeqLit, start);
      if (!accept_op("]")) {
        e.args.push_back(expr());
        while (accept_op(",")) e.args.push_back(expr());
        expect_op("]");
      }
      e.span = span_since(start);
      return e;
    }
    if (accept_keyword("if")) {
      Expr e = node(ExprKind::Cond, start);
      e.args.push_back(expr());
      expect_keyword("then");
      e.args.push_back(expr());
      expect_keyword("else");
      e.args.push_back(expr());
      expect_keyword("end");
      e.span = span_since(start);
      return e;
    }
    if (t.is_keyword("forall") || t.is_keyword("exists")) {
      ++pos_;
      Expr e = node(ExprKind::Quant, start);
      e.quant = t.lexeme == "forall" ? Quantifier::Forall : Quantifier::Exists;
      e.name = expect_ident().lexeme;
      expect_op(":");
      e.args.push_back(additive());
      expect_op("<=");
      const Token& again = expect_ident();
      if (again.lexeme != e.name) {
        throw ParseError(again.span, "quantifier bound must mention '" + e.name + "'", {e.name});
      }
      expect_op("<=");
      e.args.push_back(additive());
      expect_op("==>");
      e.args.push_back(expr());
      e.span = span_since(start);
      return e;
    }
    fail({"expression"}, "expected an expression");
  }
};

}  // namespace

bool is_builtin_name(std::string_view name) {
  for (auto b : kBuiltins) {
    if (b == name) return true;
  }
  return false;
}

Program parse(const std::vector<Token>& tokens, const std::string& file) {
  return Parser(tokens, file).program();
}

Program parse_lenient(const std::vector<Token>& tokens, const std::string& file) {
  return Parser(tokens, file, true).program();
}

Program parse_source(std::string_view source, const std::string& file) {
  return parse(tokenize(source, file), file);
}

Expr parse_expression(const std::vector<Token>& tokens) { return Parser(tokens, "<input>").whole_expression(); }

std::vector<Stmt> parse_statements(const std::vector<Token>& tokens) {
  return Parser(tokens, "<input>").whole_statements();
}

}  // namespace contraver::cvl
