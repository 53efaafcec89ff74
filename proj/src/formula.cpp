#include "bfo/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>

namespace bfo {

namespace {
FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

FormulaPtr atom(AtomKind k, Var x, Var y, uint32_t idx, bool neg) {
  Formula f;
  f.node = Formula::Node::Atom;
  f.atom = k;
  f.x = std::move(x);
  f.y = std::move(y);
  f.rel_index = idx;
  f.negated = neg;
  return make(std::move(f));
}
}  // namespace

FormulaPtr f_leq(Var x, Var y, bool n) { return atom(AtomKind::Leq, std::move(x), std::move(y), 0, n); }
FormulaPtr f_eq(Var x, Var y, bool n) { return atom(AtomKind::Eq, std::move(x), std::move(y), 0, n); }
FormulaPtr f_rel(uint32_t i, Var x, bool n) { return atom(AtomKind::Rel, std::move(x), "", i, n); }
FormulaPtr f_u(Var x, bool n) { return atom(AtomKind::U, std::move(x), "", 0, n); }
FormulaPtr f_v(Var x, bool n) { return atom(AtomKind::V, std::move(x), "", 0, n); }
FormulaPtr f_lt(const Var& x, const Var& y) { return f_leq(y, x, true); }

FormulaPtr f_true() { return f_and({}); }
FormulaPtr f_false() { return f_or({}); }

FormulaPtr f_and(std::vector<FormulaPtr> children) {
  if (children.size() == 1) return children[0];
  Formula f;
  f.node = Formula::Node::And;
  f.children = std::move(children);
  return make(std::move(f));
}

FormulaPtr f_or(std::vector<FormulaPtr> children) {
  if (children.size() == 1) return children[0];
  Formula f;
  f.node = Formula::Node::Or;
  f.children = std::move(children);
  return make(std::move(f));
}

FormulaPtr f_family_and(SchemaFamily fam) {
  Formula f;
  f.node = Formula::Node::And;
  f.family = std::move(fam);
  return make(std::move(f));
}

FormulaPtr f_family_or(SchemaFamily fam) {
  Formula f;
  f.node = Formula::Node::Or;
  f.family = std::move(fam);
  return make(std::move(f));
}

FormulaPtr f_exists(std::vector<Var> vars, FormulaPtr body) {
  if (body->node == Formula::Node::Exists) {
    auto inner = body;
    vars.insert(vars.end(), inner->qvars.begin(), inner->qvars.end());
    body = inner->body;
  }
  if (vars.empty()) return body;
  Formula f;
  f.node = Formula::Node::Exists;
  f.qvars = std::move(vars);
  f.body = std::move(body);
  return make(std::move(f));
}

FormulaPtr f_forall(std::vector<Var> vars, FormulaPtr body) {
  if (body->node == Formula::Node::Forall) {
    auto inner = body;
    vars.insert(vars.end(), inner->qvars.begin(), inner->qvars.end());
    body = inner->body;
  }
  if (vars.empty()) return body;
  Formula f;
  f.node = Formula::Node::Forall;
  f.qvars = std::move(vars);
  f.body = std::move(body);
  return make(std::move(f));
}

FormulaPtr negate_nnf(const FormulaPtr& f) {
  switch (f->node) {
    case Formula::Node::Atom: {
      Formula g = *f;
      g.negated = !g.negated;
      return make(std::move(g));
    }
    case Formula::Node::And: {
      if (f->family) throw FormulaError("cannot negate a schema family");
      std::vector<FormulaPtr> cs;
      cs.reserve(f->children.size());
      for (auto& c : f->children) cs.push_back(negate_nnf(c));
      return f_or(std::move(cs));
    }
    case Formula::Node::Or: {
      if (f->family) throw FormulaError("cannot negate a schema family");
      std::vector<FormulaPtr> cs;
      cs.reserve(f->children.size());
      for (auto& c : f->children) cs.push_back(negate_nnf(c));
      return f_and(std::move(cs));
    }
    case Formula::Node::Exists: return f_forall(f->qvars, negate_nnf(f->body));
    case Formula::Node::Forall: return f_exists(f->qvars, negate_nnf(f->body));
  }
  throw FormulaError("unreachable");
}

bool is_finitary_qf(const FormulaPtr& f) {
  switch (f->node) {
    case Formula::Node::Atom: return true;
    case Formula::Node::And:
    case Formula::Node::Or:
      if (f->family) return false;  // countable connective
      for (auto& c : f->children)
        if (!is_finitary_qf(c)) return false;
      return true;
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// family registry
// ---------------------------------------------------------------------------

namespace {
struct FamilyHooks {
  FamilyEval ev = nullptr;
  FamilyMembers members = nullptr;
};
std::map<std::string, FamilyHooks>& family_registry() {
  static std::map<std::string, FamilyHooks> r;
  return r;
}
}  // namespace

void register_family(const std::string& tag, FamilyEval ev, FamilyMembers members) {
  family_registry()[tag] = FamilyHooks{ev, members};
}

std::vector<FormulaPtr> family_members(const SchemaFamily& fam, uint32_t count) {
  auto it = family_registry().find(fam.tag);
  if (it == family_registry().end() || !it->second.members)
    throw FormulaError("unknown family tag " + fam.tag);
  return it->second.members(fam, count);
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

namespace {

constexpr uint32_t INF = 1u << 30;

struct Tag6 {
  uint32_t s = INF, p = INF, e = INF, a = INF, eb = INF, ab = INF;
};

void close_tag(Tag6& t) {
  for (int i = 0; i < 4; ++i) {
    t.s = std::min(t.s, t.p + 1);
    t.p = std::min(t.p, t.s + 1);
    t.e = std::min(t.e, std::max(t.s, 1u));
    t.a = std::min(t.a, std::max(t.p, 1u));
    t.eb = std::min(t.eb, t.e);
    t.ab = std::min(t.ab, t.a);
    t.e = std::min(t.e, t.ab + 1);
    t.a = std::min(t.a, t.eb + 1);
  }
}

Tag6 classify6(const FormulaPtr& f);

Tag6 classify_junction(const FormulaPtr& f, bool is_and) {
  std::vector<FormulaPtr> members = f->children;
  bool countable = f->family.has_value();
  if (countable) members = family_members(*f->family, 3);

  Tag6 t;
  if (!countable && is_finitary_qf(f)) {
    t.s = t.p = 0;
    close_tag(t);
    return t;
  }

  std::vector<Tag6> child;
  child.reserve(members.size());
  std::vector<bool> qf;
  size_t non_qf = 0;
  for (auto& m : members) {
    child.push_back(classify6(m));
    qf.push_back(!countable && is_finitary_qf(m));
    if (!qf.back()) ++non_qf;
  }

  // finitary quantifier-free side conjuncts/disjuncts are free: they never
  // raise the class (this keeps relativization complexity-neutral)
  Tag6 m;  // pointwise max over the relevant members (children are closed,
           // so the promotion routes are already folded into their tags)
  m.s = m.p = 0;
  m.e = m.a = m.eb = m.ab = 1;
  for (size_t i = 0; i < members.size(); ++i) {
    if (qf[i] && non_qf > 0) continue;
    m.s = std::max(m.s, child[i].s);
    m.p = std::max(m.p, child[i].p);
    m.e = std::max(m.e, child[i].e);
    m.a = std::max(m.a, child[i].a);
    m.eb = std::max(m.eb, child[i].eb);
    m.ab = std::max(m.ab, child[i].ab);
  }
  if (is_and) {
    t.p = std::max(m.p, countable ? 1u : 0u);
    t.a = m.a;    // conjunction closure
    t.ab = m.ab;
    t.eb = m.eb;  // Ebar is closed under countable conjunction too
    if (non_qf == 1 && !countable) {
      // a single non-trivial conjunct keeps its own existential classes
      t.s = m.s;
      t.e = m.e;
    }
  } else {
    t.s = std::max(m.s, countable ? 1u : 0u);
    t.e = m.e;    // disjunction closure
    t.eb = m.eb;
    t.ab = m.ab;  // Abar is closed under countable disjunction too
    if (non_qf == 1 && !countable) {
      t.p = m.p;
      t.a = m.a;
    }
  }
  close_tag(t);
  return t;
}

Tag6 classify6(const FormulaPtr& f) {
  switch (f->node) {
    case Formula::Node::Atom: {
      Tag6 t;
      t.s = t.p = 0;
      close_tag(t);
      return t;
    }
    case Formula::Node::And: return classify_junction(f, true);
    case Formula::Node::Or: return classify_junction(f, false);
    case Formula::Node::Exists: {
      Tag6 b = classify6(f->body);
      Tag6 t;
      t.s = std::max(b.s, 1u);  // existentials merge into the Sigma prefix
      t.e = b.e;                // E is closed under exists
      t.eb = t.e;
      close_tag(t);
      return t;
    }
    case Formula::Node::Forall: {
      Tag6 b = classify6(f->body);
      Tag6 t;
      t.p = std::max(b.p, 1u);
      t.a = std::max(1u, std::min(b.a, b.eb + 1));  // forall over Ebar lands in A_{+1}
      t.ab = t.a;
      close_tag(t);
      return t;
    }
  }
  throw FormulaError("unreachable");
}

}  // namespace

ComplexityTag classify(const FormulaPtr& f) {
  Tag6 t = classify6(f);
  return ComplexityTag{t.s, t.p, t.e, t.a, t.eb, t.ab};
}

// ---------------------------------------------------------------------------
// relativization
// ---------------------------------------------------------------------------

namespace {
void collect_bound(const FormulaPtr& f, std::set<Var>& out) {
  switch (f->node) {
    case Formula::Node::Atom: return;
    case Formula::Node::And:
    case Formula::Node::Or:
      for (auto& c : f->children) collect_bound(c, out);
      return;
    default:
      for (auto& v : f->qvars) out.insert(v);
      collect_bound(f->body, out);
  }
}
}  // namespace

FormulaPtr relativize(const FormulaPtr& f, const std::optional<Var>& lo,
                      const std::optional<Var>& hi) {
  if (!lo && !hi) return f;
  std::set<Var> bound;
  collect_bound(f, bound);
  if ((lo && bound.count(*lo)) || (hi && bound.count(*hi)))
    throw FormulaError("relativization bound would be captured");

  std::function<FormulaPtr(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> FormulaPtr {
    switch (g->node) {
      case Formula::Node::Atom: return g;
      case Formula::Node::And:
      case Formula::Node::Or: {
        if (g->family) {
          SchemaFamily fam = *g->family;
          fam.lo = lo ? lo : fam.lo;
          fam.hi = hi ? hi : fam.hi;
          Formula h;
          h.node = g->node;
          h.family = std::move(fam);
          return make(std::move(h));
        }
        std::vector<FormulaPtr> cs;
        cs.reserve(g->children.size());
        for (auto& c : g->children) cs.push_back(go(c));
        return g->node == Formula::Node::And ? f_and(std::move(cs)) : f_or(std::move(cs));
      }
      case Formula::Node::Exists: {
        std::vector<FormulaPtr> guards;
        for (auto& z : g->qvars) {
          if (lo) guards.push_back(f_lt(*lo, z));
          if (hi) guards.push_back(f_lt(z, *hi));
        }
        guards.push_back(go(g->body));
        return f_exists(g->qvars, f_and(std::move(guards)));
      }
      case Formula::Node::Forall: {
        std::vector<FormulaPtr> alts;
        for (auto& z : g->qvars) {
          if (lo) alts.push_back(f_leq(z, *lo));
          if (hi) alts.push_back(f_leq(*hi, z));
        }
        alts.push_back(go(g->body));
        return f_forall(g->qvars, f_or(std::move(alts)));
      }
    }
    throw FormulaError("unreachable");
  };
  return go(f);
}

// ---------------------------------------------------------------------------
// evaluation
// ---------------------------------------------------------------------------

bool eval(const LabeledFiniteOrder& M, Env& env, const FormulaPtr& f) {
  switch (f->node) {
    case Formula::Node::Atom: {
      bool v;
      switch (f->atom) {
        case AtomKind::Leq: v = env.get(f->x) <= env.get(f->y); break;
        case AtomKind::Eq: v = env.get(f->x) == env.get(f->y); break;
        case AtomKind::Rel: v = M.pred_holds(env.get(f->x), f->rel_index); break;
        case AtomKind::U: v = M.is_u(env.get(f->x)); break;
        case AtomKind::V: v = M.is_v(env.get(f->x)); break;
        default: throw FormulaError("bad atom");
      }
      return f->negated ? !v : v;
    }
    case Formula::Node::And:
    case Formula::Node::Or: {
      bool is_and = f->node == Formula::Node::And;
      if (f->family) {
        auto it = family_registry().find(f->family->tag);
        if (it == family_registry().end() || !it->second.ev)
          throw FormulaError("unknown family tag " + f->family->tag);
        if (M.size > f->family->depth)
          throw FormulaError("structure exceeds the family's declared size bound");
        return it->second.ev(*f->family, M, env);
      }
      for (auto& c : f->children) {
        bool v = eval(M, env, c);
        if (is_and && !v) return false;
        if (!is_and && v) return true;
      }
      return is_and;
    }
    case Formula::Node::Exists:
    case Formula::Node::Forall: {
      bool is_ex = f->node == Formula::Node::Exists;
      if (M.size == 0) return !is_ex;
      // save shadowed bindings before enumerating the variable block
      std::vector<std::pair<Var, std::optional<uint32_t>>> saved;
      for (auto& q : f->qvars) {
        auto it = env.vals.find(q);
        saved.emplace_back(q, it == env.vals.end() ? std::nullopt
                                                   : std::optional<uint32_t>(it->second));
      }
      auto restore = [&] {
        for (auto& [q, old] : saved) {
          if (old)
            env.vals[q] = *old;
          else
            env.vals.erase(q);
        }
      };
      std::vector<uint32_t> vals(f->qvars.size(), 0);
      for (;;) {
        for (size_t i = 0; i < f->qvars.size(); ++i) env.vals[f->qvars[i]] = vals[i];
        bool v = eval(M, env, f->body);
        if (is_ex == v) {
          restore();
          return v;
        }
        size_t i = 0;
        while (i < vals.size() && ++vals[i] == M.size) vals[i++] = 0;
        if (i == vals.size()) break;
      }
      restore();
      return !is_ex;
    }
  }
  throw FormulaError("unreachable");
}

bool eval_sentence(const LabeledFiniteOrder& M, const FormulaPtr& f) {
  Env env;
  return eval(M, env, f);
}

// ---------------------------------------------------------------------------
// S-expression reader/printer
// ---------------------------------------------------------------------------

namespace {

void print_sexpr(const FormulaPtr& f, std::string& out) {
  switch (f->node) {
    case Formula::Node::Atom: {
      if (f->negated) out += "(not ";
      switch (f->atom) {
        case AtomKind::Leq: out += "(<= " + f->x + " " + f->y + ")"; break;
        case AtomKind::Eq: out += "(= " + f->x + " " + f->y + ")"; break;
        case AtomKind::Rel: out += "(rel " + std::to_string(f->rel_index) + " " + f->x + ")"; break;
        case AtomKind::U: out += "(u " + f->x + ")"; break;
        case AtomKind::V: out += "(v " + f->x + ")"; break;
      }
      if (f->negated) out += ")";
      return;
    }
    case Formula::Node::And:
    case Formula::Node::Or: {
      if (f->family) {
        const auto& fam = *f->family;
        out += f->node == Formula::Node::And ? "(family-and " : "(family-or ";
        out += fam.tag + " (";
        for (size_t i = 0; i < fam.params.size(); ++i) {
          if (i) out += " ";
          out += std::to_string(fam.params[i]);
        }
        out += ") (";
        for (size_t i = 0; i < fam.vars.size(); ++i) {
          if (i) out += " ";
          out += fam.vars[i];
        }
        out += ")";
        if (fam.lo) out += " :lo " + *fam.lo;
        if (fam.hi) out += " :hi " + *fam.hi;
        out += " :depth " + std::to_string(fam.depth) + ")";
        return;
      }
      out += f->node == Formula::Node::And ? "(and" : "(or";
      for (auto& c : f->children) {
        out += " ";
        print_sexpr(c, out);
      }
      out += ")";
      return;
    }
    case Formula::Node::Exists:
    case Formula::Node::Forall: {
      out += f->node == Formula::Node::Exists ? "(E (" : "(A (";
      for (size_t i = 0; i < f->qvars.size(); ++i) {
        if (i) out += " ";
        out += f->qvars[i];
      }
      out += ") ";
      print_sexpr(f->body, out);
      out += ")";
      return;
    }
  }
}

struct SexprParser {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  }
  void expect(char c) {
    skip();
    if (i >= s.size() || s[i] != c) throw FormulaError("expected '" + std::string(1, c) + "'");
    ++i;
  }
  std::string token() {
    skip();
    size_t j = i;
    while (j < s.size() && !std::isspace((unsigned char)s[j]) && s[j] != '(' && s[j] != ')') ++j;
    if (j == i) throw FormulaError("expected a token");
    std::string t = s.substr(i, j - i);
    i = j;
    return t;
  }
  bool peek(char c) {
    skip();
    return i < s.size() && s[i] == c;
  }

  std::vector<Var> var_list() {
    expect('(');
    std::vector<Var> vs;
    while (!peek(')')) vs.push_back(token());
    expect(')');
    return vs;
  }

  FormulaPtr formula() {
    expect('(');
    std::string head = token();
    auto finish = [&](FormulaPtr f) {
      expect(')');
      return f;
    };
    if (head == "<=") {
      Var x = token(), y = token();
      return finish(f_leq(x, y));
    }
    if (head == "=") {
      Var x = token(), y = token();
      return finish(f_eq(x, y));
    }
    if (head == "rel") {
      uint32_t idx = (uint32_t)std::stoul(token());
      Var x = token();
      return finish(f_rel(idx, x));
    }
    if (head == "u") return finish(f_u(token()));
    if (head == "v") return finish(f_v(token()));
    if (head == "not") {
      FormulaPtr inner = formula();
      if (inner->node != Formula::Node::Atom) throw FormulaError("not applies to atomics");
      return finish(negate_nnf(inner));
    }
    if (head == "and" || head == "or") {
      std::vector<FormulaPtr> cs;
      while (!peek(')')) cs.push_back(formula());
      auto f = head == "and" ? f_and(std::move(cs)) : f_or(std::move(cs));
      // single-child junctions collapse in the constructor; keep empty ones
      return finish(f);
    }
    if (head == "E" || head == "A") {
      auto vs = var_list();
      FormulaPtr body = formula();
      return finish(head == "E" ? f_exists(vs, body) : f_forall(vs, body));
    }
    if (head == "family-and" || head == "family-or" || head == "family") {
      SchemaFamily fam;
      fam.tag = token();
      expect('(');
      while (!peek(')')) fam.params.push_back(std::stoll(token()));
      expect(')');
      fam.vars = var_list();
      while (!peek(')')) {
        std::string kw = token();
        if (kw == ":lo")
          fam.lo = token();
        else if (kw == ":hi")
          fam.hi = token();
        else if (kw == ":depth")
          fam.depth = (uint32_t)std::stoul(token());
        else
          throw FormulaError("unknown family keyword " + kw);
      }
      expect(')');
      return head == "family-or" ? f_family_or(std::move(fam)) : f_family_and(std::move(fam));
    }
    throw FormulaError("unknown head " + head);
  }
};

void free_vars_walk(const FormulaPtr& f, std::set<Var>& bound, std::vector<Var>& out,
                    std::set<Var>& seen) {
  auto add = [&](const Var& v) {
    if (v.empty() || bound.count(v) || seen.count(v)) return;
    seen.insert(v);
    out.push_back(v);
  };
  switch (f->node) {
    case Formula::Node::Atom:
      add(f->x);
      add(f->y);
      return;
    case Formula::Node::And:
    case Formula::Node::Or:
      if (f->family) {
        for (auto& v : f->family->vars) add(v);
        if (f->family->lo) add(*f->family->lo);
        if (f->family->hi) add(*f->family->hi);
        return;
      }
      for (auto& c : f->children) free_vars_walk(c, bound, out, seen);
      return;
    default: {
      std::vector<Var> added;
      for (auto& v : f->qvars)
        if (bound.insert(v).second) added.push_back(v);
      free_vars_walk(f->body, bound, out, seen);
      for (auto& v : added) bound.erase(v);
    }
  }
}

}  // namespace

std::string to_sexpr(const FormulaPtr& f) {
  std::string out;
  print_sexpr(f, out);
  return out;
}

FormulaPtr parse_formula(const std::string& text) {
  SexprParser p{text};
  FormulaPtr f = p.formula();
  p.skip();
  if (p.i != text.size()) throw FormulaError("trailing input in formula");
  return f;
}

std::vector<Var> free_vars(const FormulaPtr& f) {
  std::set<Var> bound, seen;
  std::vector<Var> out;
  free_vars_walk(f, bound, out, seen);
  return out;
}

}  // namespace bfo
