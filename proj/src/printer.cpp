#include "contraver/printer.hpp"

#include <sstream>

namespace contraver::cvl {

namespace {

// Binding strength; larger binds tighter.
constexpr int kQuantPrec = 0;
constexpr int kImpliesPrec = 1;
constexpr int kOrPrec = 2;
constexpr int kAndPrec = 3;
constexpr int kNotPrec = 4;
constexpr int kCmpPrec = 5;
constexpr int kAddPrec = 6;
constexpr int kMulPrec = 7;
constexpr int kUnaryPrec = 8;
constexpr int kPostfixPrec = 9;
constexpr int kAtomPrec = 10;

int binary_prec(BinaryOp op) {
  switch (op) {
    case BinaryOp::Implies: return kImpliesPrec;
    case BinaryOp::Or: return kOrPrec;
    case BinaryOp::And: return kAndPrec;
    case BinaryOp::Add:
    case BinaryOp::Sub: return kAddPrec;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return kMulPrec;
    default: return kCmpPrec;
  }
}

int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Quant: return kQuantPrec;
    case ExprKind::Binary: return binary_prec(e.binary);
    case ExprKind::Unary: return e.unary == UnaryOp::Not ? kNotPrec : kUnaryPrec;
    case ExprKind::Old: return kUnaryPrec;
    case ExprKind::Index:
    case ExprKind::Field: return kPostfixPrec;
    default: return kAtomPrec;
  }
}

std::string expr_text(const Expr& e, int min_prec);

std::string args_text(const std::vector<Expr>& args, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < args.size(); ++i) {
    if (i > from) out += ", ";
    out += expr_text(args[i], kQuantPrec);
  }
  return out;
}

std::string expr_text(const Expr& e, int min_prec) {
  std::string out;
  switch (e.kind) {
    case ExprKind::IntLit: out = std::to_string(e.int_value); break;
    case ExprKind::BoolLit: out = e.bool_value ? "true" : "false"; break;
    case ExprKind::Var: out = e.name; break;
    case ExprKind::Result: out = "Result"; break;
    case ExprKind::Old: out = "old " + expr_text(e.args[0], kPostfixPrec); break;
    case ExprKind::Unary:
      out = e.unary == UnaryOp::Not ? "not " + expr_text(e.args[0], kNotPrec)
                                    : "-" + expr_text(e.args[0], kPostfixPrec);
      break;
    case ExprKind::Binary: {
      const int p = binary_prec(e.binary);
      int lp = p, rp = p + 1;
      if (e.binary == BinaryOp::Implies) {
        lp = p + 1;
        rp = p;
      } else if (p == kCmpPrec) {
        lp = rp = kAddPrec;
      }
      out = expr_text(e.args[0], lp) + " " + to_string(e.binary) + " " + expr_text(e.args[1], rp);
      break;
    }
    case ExprKind::Quant:
      out = std::string(e.quant == Quantifier::Forall ? "forall " : "exists ") + e.name + ": " +
            expr_text(e.args[0], kAddPrec) + " <= " + e.name + " <= " + expr_text(e.args[1], kAddPrec) +
            " ==> " + expr_text(e.args[2], kQuantPrec);
      break;
    case ExprKind::Cond:
      out = "if " + expr_text(e.args[0], kQuantPrec) + " then " + expr_text(e.args[1], kQuantPrec) + " else " +
            expr_text(e.args[2], kQuantPrec) + " end";
      break;
    case ExprKind::Index:
      out = expr_text(e.args[0], kPostfixPrec) + "[" + expr_text(e.args[1], kQuantPrec) + "]";
      break;
    case ExprKind::Apply:
      out = e.args.empty() && e.name == "empty_bag" ? e.name : e.name + "(" + args_text(e.args) + ")";
      break;
    case ExprKind::Field: out = expr_text(e.args[0], kPostfixPrec) + "." + e.name; break;
    case ExprKind::SeqLit: out = "[" + args_text(e.args) + "]"; break;
  }
  if (prec(e) < min_prec) return "(" + out + ")";
  return out;
}

std::string pad(int indent) { return std::string(static_cast<std::size_t>(indent) * 4, ' '); }

void print_clauses(std::ostringstream& os, const char* keyword, const std::vector<LabeledExpr>& clauses,
                   int indent) {
  if (clauses.empty()) return;
  os << pad(indent) << keyword << "\n";
  for (const auto& c : clauses) {
    os << pad(indent + 1);
    if (!c.label.empty()) os << c.label << ": ";
    os << expr_text(c.expr, kQuantPrec) << ";\n";
  }
}

void print_body(std::ostringstream& os, const std::vector<Stmt>& body, int indent);

void print_stmt(std::ostringstream& os, const Stmt& s, int indent) {
  switch (s.kind) {
    case StmtKind::Assign:
      os << pad(indent) << s.target;
      if (!s.target_field.empty()) os << "." << s.target_field;
      os << " := " << expr_text(s.value, kQuantPrec) << "\n";
      break;
    case StmtKind::Call:
      os << pad(indent);
      if (!s.target.empty()) os << s.target << " := ";
      os << s.callee << "(" << args_text(s.args) << ")\n";
      break;
    case StmtKind::If:
      os << pad(indent) << "if " << expr_text(s.value, kQuantPrec) << " then\n";
      print_body(os, s.then_body, indent + 1);
      if (!s.else_body.empty()) {
        os << pad(indent) << "else\n";
        print_body(os, s.else_body, indent + 1);
      }
      os << pad(indent) << "end\n";
      break;
    case StmtKind::While:
      os << pad(indent) << "while " << expr_text(s.value, kQuantPrec) << "\n";
      print_clauses(os, "invariant", s.invariants, indent);
      if (s.variant) os << pad(indent) << "variant " << expr_text(*s.variant, kQuantPrec) << "\n";
      os << pad(indent) << "do\n";
      print_body(os, s.then_body, indent + 1);
      os << pad(indent) << "end\n";
      break;
    case StmtKind::Check:
      os << pad(indent) << "check " << expr_text(s.value, kQuantPrec) << " end\n";
      break;
    case StmtKind::UseInvariant:
      os << pad(indent) << "use_invariant " << s.target << "\n";
      break;
  }
}

void print_body(std::ostringstream& os, const std::vector<Stmt>& body, int indent) {
  for (const auto& s : body) print_stmt(os, s, indent);
}

std::string params_text(const std::vector<Param>& params) {
  std::string out;
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    if (params[i].inout) out += "inout ";
    out += params[i].name + ": " + params[i].type.to_string();
  }
  return out;
}

}  // namespace

std::string print(const Expr& e) { return expr_text(e, kQuantPrec); }

std::string print(const std::vector<Stmt>& body, int indent) {
  std::ostringstream os;
  print_body(os, body, indent);
  return os.str();
}

std::string print(const Program& p) {
  std::ostringstream os;
  for (const auto& c : p.constants) os << "const " << c.name << " = " << c.value << "\n";
  for (const auto& g : p.ghosts) {
    os << "\nghost function " << g.name << "(" << params_text(g.params) << "): " << g.return_type.to_string()
       << " =\n"
       << pad(1) << expr_text(g.body, kQuantPrec) << "\n";
  }
  for (const auto& s : p.structs) {
    os << "\nstruct " << s.name << " { " << params_text(s.fields) << " }\n";
    print_clauses(os, "invariant", s.invariants, 0);
  }
  for (const auto& r : p.routines) {
    os << "\nroutine " << r.name << "(" << params_text(r.params) << ")";
    if (r.return_type) os << ": " << r.return_type->to_string();
    os << "\n";
    print_clauses(os, "require", r.preconditions, 0);
    if (!r.modifies.empty()) {
      os << "modify ";
      for (std::size_t i = 0; i < r.modifies.size(); ++i) os << (i ? ", " : "") << r.modifies[i].name;
      os << "\n";
    }
    if (r.variant) os << "variant " << expr_text(*r.variant, kQuantPrec) << "\n";
    os << "do\n";
    print_body(os, r.body, 1);
    os << "end\n";
    print_clauses(os, "ensure", r.postconditions, 0);
  }
  return os.str();
}

}  // namespace contraver::cvl
