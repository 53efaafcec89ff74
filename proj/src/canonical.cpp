#include "bfo/canonical.hpp"

#include "bfo/bf.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <unordered_map>

namespace bfo {

LabeledFiniteOrder substructure(const LabeledFiniteOrder& M, int64_t lo_excl, int64_t hi_excl) {
  LabeledFiniteOrder out;
  out.tracked = M.tracked;
  out.has_uv = M.has_uv;
  for (int64_t e = lo_excl + 1; e < hi_excl; ++e) {
    if (e < 0 || e >= (int64_t)M.size) throw TupleError("substructure bound out of range");
    out.size++;
    if (M.tracked) out.labels.push_back(M.labels[(size_t)e]);
    if (M.has_uv) out.uv.push_back(M.uv[(size_t)e]);
  }
  return out;
}

FormulaPtr atomic_type_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                               const std::vector<Var>& xs) {
  if (a.size() != xs.size()) throw FormulaError("type formula arity mismatch");
  std::vector<FormulaPtr> cs;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) {
      if (a[i] < a[j])
        cs.push_back(f_lt(xs[i], xs[j]));
      else if (a[i] > a[j])
        cs.push_back(f_lt(xs[j], xs[i]));
      else
        cs.push_back(f_eq(xs[i], xs[j]));
    }
  for (size_t i = 0; i < a.size(); ++i) {
    for (uint32_t k = 0; k < A.tracked; ++k)
      cs.push_back(f_rel(k, xs[i], !A.pred_holds(a[i], k)));
    if (A.has_uv) {
      cs.push_back(f_u(xs[i], !A.is_u(a[i])));
      cs.push_back(f_v(xs[i], !A.is_v(a[i])));
    }
  }
  return f_and(std::move(cs));
}

// ---------------------------------------------------------------------------
// type-formula families
//
//   le-type (Ebar_n):  AND over finite tuples a' of A of  E y-bar . ge-inner
//   ge-type (A_n):     AND over lengths m of  A y-bar^m . OR over a' in A^m
//
// with the rank-0 leaves being atomic-type formulas. Families are evaluated
// exactly: the inner searches realize the quantifier semantics directly, and
// tuple lengths truncate losslessly at the structure size (longer tuples only
// repeat values, and the inner disjunctions absorb repetitions).
// ---------------------------------------------------------------------------

namespace {

struct CanonParams {
  LabeledFiniteOrder A;
  std::vector<uint32_t> tuple;
  uint32_t rank = 1;
};

std::vector<int64_t> encode_params(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                                   uint32_t rank) {
  std::vector<int64_t> p;
  p.push_back(A.size);
  p.push_back(A.tracked);
  for (uint32_t i = 0; i < A.size; ++i) p.push_back(A.tracked ? A.labels[i] : 0);
  p.push_back(A.has_uv ? 1 : 0);
  if (A.has_uv)
    for (uint32_t i = 0; i < A.size; ++i) p.push_back(A.uv[i]);
  p.push_back((int64_t)a.size());
  for (auto x : a) p.push_back(x);
  p.push_back(rank);
  return p;
}

CanonParams decode_params(const SchemaFamily& fam) {
  CanonParams c;
  size_t i = 0;
  auto next = [&] { return fam.params.at(i++); };
  c.A.size = (uint32_t)next();
  c.A.tracked = (uint32_t)next();
  for (uint32_t k = 0; k < c.A.size; ++k) c.A.labels.push_back((uint32_t)next());
  if (!c.A.tracked) c.A.labels.clear();
  c.A.has_uv = next() != 0;
  if (c.A.has_uv)
    for (uint32_t k = 0; k < c.A.size; ++k) c.A.uv.push_back((uint8_t)next());
  int64_t len = next();
  for (int64_t k = 0; k < len; ++k) c.tuple.push_back((uint32_t)next());
  c.rank = (uint32_t)next();
  return c;
}

int sgn64(int64_t v) { return v < 0 ? -1 : v > 0 ? 1 : 0; }

bool pair_types_equal(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                      const LabeledFiniteOrder& B, const std::vector<uint32_t>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    uint32_t la = A.tracked ? A.labels[a[i]] : 0;
    uint32_t lb = B.tracked ? B.labels[b[i]] : 0;
    if (la != lb) return false;
    if (A.is_u(a[i]) != B.is_u(b[i]) || A.is_v(a[i]) != B.is_v(b[i])) return false;
    for (size_t j = 0; j < i; ++j)
      if (sgn64((int64_t)a[i] - a[j]) != sgn64((int64_t)b[i] - b[j])) return false;
  }
  return true;
}

std::unordered_map<std::string, bool>& canon_memo() {
  static std::unordered_map<std::string, bool> m;
  return m;
}
std::mutex& canon_mutex() {
  static std::mutex m;
  return m;
}

struct CanonEvaluator {
  const LabeledFiniteOrder& A;
  const LabeledFiniteOrder& B;
  int64_t lo, hi;  // open interval of B the quantifiers range over
  std::string prefix;
  std::unordered_map<std::string, bool>& memo = canon_memo();

  std::vector<uint32_t> interval_elems() const {
    std::vector<uint32_t> out;
    for (int64_t e = lo + 1; e < hi; ++e) out.push_back((uint32_t)e);
    return out;
  }

  static void canonical_pairs(std::vector<uint32_t>& a, std::vector<uint32_t>& b) {
    std::vector<std::pair<uint32_t, uint32_t>> ps(a.size());
    for (size_t i = 0; i < a.size(); ++i) ps[i] = {a[i], b[i]};
    std::sort(ps.begin(), ps.end());
    ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
    a.clear();
    b.clear();
    for (auto& [x, y] : ps) {
      a.push_back(x);
      b.push_back(y);
    }
  }

  std::string key(bool ge, std::vector<uint32_t> a, std::vector<uint32_t> b, uint32_t n) {
    canonical_pairs(a, b);
    std::string k = prefix + (ge ? "g" : "l");
    k += std::to_string(n) + ":";
    for (auto x : a) k += std::to_string(x) + ",";
    k += ";";
    for (auto x : b) k += std::to_string(x) + ",";
    return k;
  }

  bool le(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b, uint32_t n) {
    if (!pair_types_equal(A, a, B, b)) return false;
    if (n == 0) return true;
    std::string k = key(false, a, b, n);
    {
      std::lock_guard<std::mutex> lock(canon_mutex());
      auto it = memo.find(k);
      if (it != memo.end()) return it->second;
    }
    // AND over reduced tuples a' of A (increasing, distinct; other shapes
    // reduce to these): exists y-bar in the interval matching at n-1
    std::vector<uint32_t> aprime;
    bool ok = le_all_tuples(a, b, aprime, 0, n);
    std::lock_guard<std::mutex> lock(canon_mutex());
    memo.emplace(std::move(k), ok);
    return ok;
  }

  bool le_all_tuples(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                     std::vector<uint32_t>& aprime, uint32_t lo_elem, uint32_t n) {
    std::vector<uint32_t> w;
    if (!exists_witness(a, b, aprime, w, n)) return false;
    for (uint32_t x = lo_elem; x < A.size; ++x) {
      aprime.push_back(x);
      bool ok = le_all_tuples(a, b, aprime, x + 1, n);
      aprime.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  // exists w-bar in (lo,hi) of B with inner(a+aprime, b+w, n-1)
  bool exists_witness(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                      const std::vector<uint32_t>& aprime, std::vector<uint32_t>& w, uint32_t n) {
    if (w.size() == aprime.size()) {
      std::vector<uint32_t> ea = a, eb = b;
      ea.insert(ea.end(), aprime.begin(), aprime.end());
      eb.insert(eb.end(), w.begin(), w.end());
      return n == 1 ? pair_types_equal(A, ea, B, eb) : ge(ea, eb, n - 1);
    }
    size_t j = w.size();
    for (int64_t x = lo + 1; x < hi; ++x) {
      if (!mirrors(B, (uint32_t)x, A, aprime[j], b, a, w, aprime, j)) continue;
      w.push_back((uint32_t)x);
      if (exists_witness(a, b, aprime, w, n)) return true;
      w.pop_back();
    }
    return false;
  }

  bool ge(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b, uint32_t n) {
    if (!pair_types_equal(A, a, B, b)) return false;
    if (n == 0) return true;
    std::string k = key(true, a, b, n);
    {
      std::lock_guard<std::mutex> lock(canon_mutex());
      auto it = memo.find(k);
      if (it != memo.end()) return it->second;
    }
    // AND over lengths m (lossless truncation at the interval size): for all
    // w-bar in the interval, some a' in A^m matches at n-1
    auto elems = interval_elems();
    std::vector<uint32_t> w;
    bool ok = ge_all_words(a, b, w, elems, elems.size(), n);
    std::lock_guard<std::mutex> lock(canon_mutex());
    memo.emplace(std::move(k), ok);
    return ok;
  }

  bool ge_all_words(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                    std::vector<uint32_t>& w, const std::vector<uint32_t>& elems, size_t max_len,
                    uint32_t n) {
    std::vector<uint32_t> aprime;
    if (!exists_match(a, b, w, aprime, n)) return false;
    if (w.size() == max_len) return true;
    for (uint32_t x : elems) {
      w.push_back(x);
      bool ok = ge_all_words(a, b, w, elems, max_len, n);
      w.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  // exists a' in A^{|w|} with inner(a+a', b+w, n-1)
  bool exists_match(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                    const std::vector<uint32_t>& w, std::vector<uint32_t>& aprime, uint32_t n) {
    if (aprime.size() == w.size()) {
      std::vector<uint32_t> ea = a, eb = b;
      ea.insert(ea.end(), aprime.begin(), aprime.end());
      eb.insert(eb.end(), w.begin(), w.end());
      return n == 1 ? pair_types_equal(A, ea, B, eb) : le(ea, eb, n - 1);
    }
    size_t j = aprime.size();
    for (uint32_t x = 0; x < A.size; ++x) {
      if (!mirrors(A, x, B, w[j], a, b, aprime, w, j)) continue;
      aprime.push_back(x);
      if (exists_match(a, b, w, aprime, n)) return true;
      aprime.pop_back();
    }
    return false;
  }

  // candidate x in SX must relate to prior picks exactly as y does in SY;
  // only a pruning aid, the leaf type check is what decides
  static bool mirrors(const LabeledFiniteOrder& SX, uint32_t x, const LabeledFiniteOrder& SY,
                      uint32_t y, const std::vector<uint32_t>& xs_base,
                      const std::vector<uint32_t>& ys_base, const std::vector<uint32_t>& xs_ext,
                      const std::vector<uint32_t>& ys_ext, size_t ext_len) {
    uint32_t lx = SX.tracked ? SX.labels[x] : 0, ly = SY.tracked ? SY.labels[y] : 0;
    if (lx != ly) return false;
    if (SX.is_u(x) != SY.is_u(y) || SX.is_v(x) != SY.is_v(y)) return false;
    for (size_t i = 0; i < xs_base.size(); ++i)
      if (sgn64((int64_t)x - xs_base[i]) != sgn64((int64_t)y - ys_base[i])) return false;
    for (size_t i = 0; i < ext_len; ++i)
      if (sgn64((int64_t)x - xs_ext[i]) != sgn64((int64_t)y - ys_ext[i])) return false;
    return true;
  }
};

bool canon_eval(bool ge, const SchemaFamily& fam, const LabeledFiniteOrder& B, Env& env) {
  CanonParams cp = decode_params(fam);
  std::vector<uint32_t> b;
  b.reserve(fam.vars.size());
  for (auto& v : fam.vars) b.push_back(env.get(v));
  if (b.size() != cp.tuple.size()) throw FormulaError("family arity mismatch");
  int64_t lo = fam.lo ? (int64_t)env.get(*fam.lo) : -1;
  int64_t hi = fam.hi ? (int64_t)env.get(*fam.hi) : (int64_t)B.size;
  std::string prefix =
      cp.A.key() + "|" + B.key() + "|" + std::to_string(lo) + "|" + std::to_string(hi) + "|";
  CanonEvaluator ev{cp.A, B, lo, hi, std::move(prefix)};
  return ge ? ev.ge(cp.tuple, b, cp.rank) : ev.le(cp.tuple, b, cp.rank);
}

bool canon_eval_le(const SchemaFamily& fam, const LabeledFiniteOrder& B, Env& env) {
  return canon_eval(false, fam, B, env);
}
bool canon_eval_ge(const SchemaFamily& fam, const LabeledFiniteOrder& B, Env& env) {
  return canon_eval(true, fam, B, env);
}

Var member_var(size_t k) { return "y" + std::to_string(k); }

std::vector<FormulaPtr> canon_members_le(const SchemaFamily& fam, uint32_t count) {
  CanonParams cp = decode_params(fam);
  // reduced tuples a', by length then lexicographically
  std::vector<std::vector<uint32_t>> tuples{{}};
  for (uint32_t len = 1; len <= std::min<uint32_t>(cp.A.size, 2); ++len) {
    std::vector<uint32_t> cur;
    std::function<void(uint32_t)> rec = [&](uint32_t lo) {
      if (cur.size() == len) {
        tuples.push_back(cur);
        return;
      }
      for (uint32_t x = lo; x < cp.A.size; ++x) {
        cur.push_back(x);
        rec(x + 1);
        cur.pop_back();
      }
    };
    rec(0);
  }
  std::vector<FormulaPtr> out;
  for (auto& ap : tuples) {
    if (out.size() >= count) break;
    std::vector<Var> ys;
    for (size_t k = 0; k < ap.size(); ++k) ys.push_back(member_var(fam.vars.size() + k));
    std::vector<uint32_t> ext = cp.tuple;
    ext.insert(ext.end(), ap.begin(), ap.end());
    std::vector<Var> xs = fam.vars;
    xs.insert(xs.end(), ys.begin(), ys.end());
    FormulaPtr inner;
    if (cp.rank == 1) {
      inner = atomic_type_formula(cp.A, ext, xs);
    } else {
      SchemaFamily g;
      g.tag = "ge-type";
      g.params = encode_params(cp.A, ext, cp.rank - 1);
      g.vars = xs;
      g.depth = fam.depth;
      g.lo = fam.lo;
      g.hi = fam.hi;
      inner = f_family_and(std::move(g));
    }
    FormulaPtr member = ys.empty() ? inner : f_exists(ys, inner);
    if (fam.lo || fam.hi) {
      std::vector<FormulaPtr> guards;
      for (auto& z : ys) {
        if (fam.lo) guards.push_back(f_lt(*fam.lo, z));
        if (fam.hi) guards.push_back(f_lt(z, *fam.hi));
      }
      if (!guards.empty()) {
        guards.push_back(inner);
        member = f_exists(ys, f_and(std::move(guards)));
      }
    }
    out.push_back(member);
  }
  return out;
}

std::vector<FormulaPtr> canon_members_ge(const SchemaFamily& fam, uint32_t count) {
  CanonParams cp = decode_params(fam);
  std::vector<FormulaPtr> out;
  for (uint32_t m = 0; m < count; ++m) {
    std::vector<Var> ys;
    for (size_t k = 0; k < m; ++k) ys.push_back(member_var(fam.vars.size() + k));
    // OR over all a' in A^m
    std::vector<std::vector<uint32_t>> words{{}};
    for (uint32_t k = 0; k < m; ++k) {
      std::vector<std::vector<uint32_t>> next;
      for (auto& w : words)
        for (uint32_t x = 0; x < cp.A.size; ++x) {
          auto e = w;
          e.push_back(x);
          next.push_back(std::move(e));
        }
      words = std::move(next);
    }
    std::vector<FormulaPtr> disjuncts;
    std::vector<Var> xs = fam.vars;
    xs.insert(xs.end(), ys.begin(), ys.end());
    for (auto& ap : words) {
      std::vector<uint32_t> ext = cp.tuple;
      ext.insert(ext.end(), ap.begin(), ap.end());
      if (cp.rank == 1) {
        disjuncts.push_back(atomic_type_formula(cp.A, ext, xs));
      } else {
        SchemaFamily g;
        g.tag = "le-type";
        g.params = encode_params(cp.A, ext, cp.rank - 1);
        g.vars = xs;
        g.depth = fam.depth;
        g.lo = fam.lo;
        g.hi = fam.hi;
        disjuncts.push_back(f_family_and(std::move(g)));
      }
    }
    FormulaPtr body = f_or(std::move(disjuncts));
    FormulaPtr member;
    if (ys.empty()) {
      member = body;
    } else if (fam.lo || fam.hi) {
      std::vector<FormulaPtr> alts;
      for (auto& z : ys) {
        if (fam.lo) alts.push_back(f_leq(z, *fam.lo));
        if (fam.hi) alts.push_back(f_leq(*fam.hi, z));
      }
      alts.push_back(body);
      member = f_forall(ys, f_or(std::move(alts)));
    } else {
      member = f_forall(ys, body);
    }
    out.push_back(member);
  }
  return out;
}

struct CanonRegistrar {
  CanonRegistrar() {
    register_family("le-type", canon_eval_le, canon_members_le);
    register_family("ge-type", canon_eval_ge, canon_members_ge);
  }
} canon_registrar;

}  // namespace

FormulaPtr canonical_le_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                                uint32_t rank, uint32_t size_bound) {
  if (rank == 0) throw FormulaError("type formulas start at rank 1");
  SchemaFamily fam;
  fam.tag = "le-type";
  fam.params = encode_params(A, a, rank);
  for (size_t i = 0; i < a.size(); ++i) fam.vars.push_back("x" + std::to_string(i));
  fam.depth = size_bound;
  return f_family_and(std::move(fam));
}

FormulaPtr canonical_ge_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                                uint32_t rank, uint32_t size_bound) {
  if (rank == 0) throw FormulaError("type formulas start at rank 1");
  SchemaFamily fam;
  fam.tag = "ge-type";
  fam.params = encode_params(A, a, rank);
  for (size_t i = 0; i < a.size(); ++i) fam.vars.push_back("x" + std::to_string(i));
  fam.depth = size_bound;
  return f_family_and(std::move(fam));
}

}  // namespace bfo
