#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfo/finite.hpp"

namespace bfo {

using Var = std::string;

struct FormulaError : std::runtime_error {
  explicit FormulaError(const std::string& m) : std::runtime_error(m) {}
};

enum class AtomKind : uint8_t { Leq, Eq, Rel, U, V };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Finite description of a countable conjunction/disjunction: a registered tag
// plus parameters. Members are generated on demand; evaluation may use a
// registered exact evaluator instead of enumeration. An optional lo/hi pair
// relativizes every member to the open interval (lo, hi).
struct SchemaFamily {
  std::string tag;
  std::vector<int64_t> params;
  std::vector<Var> vars;  // free variables, in positional order
  uint32_t depth = 16;    // declared structure-size bound for evaluation
  std::optional<Var> lo, hi;
};

struct Formula {
  enum class Node : uint8_t { Atom, And, Or, Exists, Forall };
  Node node = Node::Atom;

  // Atom
  AtomKind atom = AtomKind::Leq;
  bool negated = false;
  uint32_t rel_index = 0;
  Var x, y;

  // And / Or
  std::vector<FormulaPtr> children;
  std::optional<SchemaFamily> family;

  // Exists / Forall
  std::vector<Var> qvars;
  FormulaPtr body;
};

// constructors (negation lives on atoms only; use negate_nnf for general use)
FormulaPtr f_leq(Var x, Var y, bool negated = false);
FormulaPtr f_eq(Var x, Var y, bool negated = false);
FormulaPtr f_rel(uint32_t i, Var x, bool negated = false);
FormulaPtr f_u(Var x, bool negated = false);
FormulaPtr f_v(Var x, bool negated = false);
FormulaPtr f_true();   // empty conjunction
FormulaPtr f_false();  // empty disjunction
FormulaPtr f_and(std::vector<FormulaPtr> children);
FormulaPtr f_or(std::vector<FormulaPtr> children);
FormulaPtr f_family_and(SchemaFamily fam);
FormulaPtr f_family_or(SchemaFamily fam);
FormulaPtr f_exists(std::vector<Var> vars, FormulaPtr body);  // merges nested E
FormulaPtr f_forall(std::vector<Var> vars, FormulaPtr body);
FormulaPtr f_lt(const Var& x, const Var& y);  // x < y as a negated leq atom

FormulaPtr negate_nnf(const FormulaPtr& f);  // dualizing negation

// Least membership indices in the six syntactic classes. Sigma/Pi start at 0,
// the game-aligned classes at 1.
struct ComplexityTag {
  uint32_t sigma = 0, pi = 0;
  uint32_t e = 1, a = 1, ebar = 1, abar = 1;
};
ComplexityTag classify(const FormulaPtr& f);

bool is_finitary_qf(const FormulaPtr& f);

// Quantifier relativization to the open interval (lo, hi); absent bounds are
// one-sided. Complexity tags are unchanged (guards are quantifier-free).
FormulaPtr relativize(const FormulaPtr& f, const std::optional<Var>& lo,
                      const std::optional<Var>& hi);

struct Env {
  std::map<Var, uint32_t> vals;
  uint32_t get(const Var& v) const {
    auto it = vals.find(v);
    if (it == vals.end()) throw FormulaError("unassigned variable " + v);
    return it->second;
  }
};

bool eval(const LabeledFiniteOrder& M, Env& env, const FormulaPtr& f);
bool eval_sentence(const LabeledFiniteOrder& M, const FormulaPtr& f);

// members of a family, for classification sampling and generic inspection
std::vector<FormulaPtr> family_members(const SchemaFamily& fam, uint32_t count);

// registry hooks (filled by the canonical-formula machinery)
using FamilyEval = bool (*)(const SchemaFamily&, const LabeledFiniteOrder&, Env&);
using FamilyMembers = std::vector<FormulaPtr> (*)(const SchemaFamily&, uint32_t);
void register_family(const std::string& tag, FamilyEval ev, FamilyMembers members);

std::string to_sexpr(const FormulaPtr& f);
FormulaPtr parse_formula(const std::string& text);

// free variables in order of first occurrence
std::vector<Var> free_vars(const FormulaPtr& f);

}  // namespace bfo
