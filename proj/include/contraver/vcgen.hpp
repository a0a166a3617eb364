#pragma once

#include <string>
#include <vector>

#include "contraver/ast.hpp"
#include "contraver/logic.hpp"

namespace contraver::vc {

enum class VcKind {
  PreconditionAtCall,
  Postcondition,
  LoopInitiation,
  LoopConsecution,
  LoopExitImpliesPost,
  VariantNonneg,
  VariantDecrease,
  Check,
  FramePreservation,
  InvariantPreservation,
  Smoke,
};

const char* to_string(VcKind k);

enum class InvariantMode { Implicit, Explicit };

const char* to_string(InvariantMode m);

struct VcOptions {
  InvariantMode invariants = InvariantMode::Implicit;
  bool smoke = true;
};

/// What a Smoke VC probes.
enum class SmokeTarget { None, Precondition, LoopBody, CheckSite };

struct VerificationCondition {
  std::string id;  // routine:label:Kind:index
  std::string routine;
  std::string label;
  VcKind kind = VcKind::Postcondition;
  int index = 1;
  logic::Term hypothesis;
  logic::Term goal;
  SourceSpan span;
  SmokeTarget smoke = SmokeTarget::None;

  /// hypothesis ⇒ goal
  logic::Term formula() const;
};

struct VCSet {
  std::string routine;
  std::vector<VerificationCondition> vcs;
  VcOptions options;
};

/// An obligation point in the core program.
struct Site {
  int id = 0;
  VcKind kind = VcKind::Check;
  std::string label;
  SourceSpan span;
  SmokeTarget smoke = SmokeTarget::None;
};

enum class CoreKind { Assign, Assert, Assume, Havoc, If, Choice };

/// Guarded-command statement. Assign/Havoc use `var` (and `value` for the
/// assignment); Assert/Assume/If use `cond`; If and Choice use the two
/// branches `first` and `second`.
struct Core {
  CoreKind kind = CoreKind::Assume;
  std::string var;
  logic::Sort sort = logic::Sort::Int;
  logic::Term value;
  logic::Term cond;
  Site site;
  std::vector<Core> first;
  std::vector<Core> second;
};

struct CoreRoutine {
  std::string name;
  logic::Term hypothesis;       // entry assumptions
  std::vector<Core> body;       // entry snapshots, body, exit obligations
  std::vector<Site> sites;      // every Assert, in creation order
};

/// Lowers a typechecked routine to the core language: `old` becomes entry
/// snapshot variables, loops are cut by their invariants, calls use only
/// the callee's contract.
CoreRoutine desugar(const cvl::Program& p, const cvl::Routine& r, const VcOptions& opts = {});

/// Classic weakest precondition, no simplification: every assertion is
/// required (`q ∧ P`), every assumption guards (`q ⇒ P`).
logic::Term wp(const std::vector<Core>& body, const logic::Term& post);

/// wp of loop-free source statements of `r`.
logic::Term wp(const cvl::Program& p, const cvl::Routine& r, const std::vector<cvl::Stmt>& body,
               const logic::Term& post);

/// Obligations for one routine (no Smoke VCs), in deterministic order.
VCSet generate_vcs(const cvl::Program& p, const std::string& routine, const VcOptions& opts = {});

/// Smoke VCs (goal `false`): precondition, each loop body, each check site.
VCSet generate_smoke_vcs(const cvl::Program& p, const std::string& routine, const VcOptions& opts = {});

/// Ghost functions as logic definitions, callees before callers.
std::vector<logic::GhostDef> ghost_definitions(const cvl::Program& p);

/// Translates a specification expression where every variable is free
/// (named `v.<name>`).
logic::Term translate(const cvl::Program& p, const cvl::Expr& e);

/// Logic variable naming.
std::string program_var(const std::string& name);                 // v.x
std::string old_var(const std::string& name);                     // old.x
std::string field_var(const std::string& base, const std::string& field);  // base.field
logic::Sort sort_of(const cvl::Type& t);

/// Human-readable dump, one VC per block.
std::string dump(const VCSet& set);

}  // namespace contraver::vc
