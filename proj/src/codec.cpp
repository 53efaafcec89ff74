#include "bfo/codec.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "json.hpp"

#include "bfo/formula.hpp"

namespace bfo {

uint64_t AxiomReport::checked() const {
  uint64_t n = 0;
  for (auto& l : lines) n += l.checked;
  return n;
}
uint64_t AxiomReport::violated() const {
  uint64_t n = 0;
  for (auto& l : lines) n += l.violated;
  return n;
}

// ---------------------------------------------------------------------------
// run-shape analysis: maximal successor runs of a term order, with counts of
// consecutive k-tuples, end-run lengths, and pair-accumulation flags. Chains
// of runs across product copies cannot occur after normalization (a finite
// block over an infinite index is absorbed), which keeps this compositional.
// ---------------------------------------------------------------------------

namespace {

constexpr uint64_t kInfLen = UINT64_MAX;

struct Cnt {
  uint64_t v = 0;
  bool inf = false;

  static Cnt of(uint64_t x) { return Cnt{x, false}; }
  static Cnt infinite() { return Cnt{0, true}; }
  bool zero() const { return !inf && v == 0; }
  Cnt operator+(const Cnt& o) const {
    if (inf || o.inf) return infinite();
    return of(v + o.v);
  }
  Cnt operator*(const Cnt& o) const {
    if (zero() || o.zero()) return of(0);
    if (inf || o.inf) return infinite();
    return of(v * o.v);
  }
};

// k-tuples of consecutive points contributed by one run of length `len`
Cnt run_contrib(uint64_t len, uint32_t k) {
  if (len == kInfLen) return Cnt::infinite();
  return Cnt::of(len >= k ? len - k + 1 : 0);
}

struct RunShape {
  bool empty = true;
  bool has_first = false, has_last = false;
  uint64_t head_run = 0;  // run length at the bottom end (0 if no first)
  uint64_t tail_run = 0;
  bool single_run = false;  // the whole order is one run
  uint64_t max_run = 0;     // kInfLen for an infinite run
  Cnt c2, c3, c4;           // totals over all runs
  bool pairs_up = false;    // every final segment contains a successor pair
  bool pairs_down = false;
  bool lim_left = false;  // some non-first point has no predecessor
  bool lim_right = false;
};

RunShape run_shape(const Term& t);

RunShape rs_fin(uint64_t k) {
  RunShape r;
  if (k == 0) return r;
  r.empty = false;
  r.has_first = r.has_last = true;
  r.head_run = r.tail_run = k;
  r.single_run = true;
  r.max_run = k;
  r.c2 = run_contrib(k, 2);
  r.c3 = run_contrib(k, 3);
  r.c4 = run_contrib(k, 4);
  return r;
}

RunShape rs_combine(const RunShape& A, const RunShape& B) {
  if (A.empty) return B;
  if (B.empty) return A;
  RunShape r;
  r.empty = false;
  r.has_first = A.has_first;
  r.has_last = B.has_last;
  r.pairs_up = B.pairs_up;
  r.pairs_down = A.pairs_down;
  r.lim_left = A.lim_left || B.lim_left || (B.has_first && !A.has_last);
  r.lim_right = A.lim_right || B.lim_right || (A.has_last && !B.has_first);
  bool merge = A.has_last && B.has_first;
  auto add = [](uint64_t a, uint64_t b) {
    return (a == kInfLen || b == kInfLen) ? kInfLen : a + b;
  };
  if (merge) {
    uint64_t m = add(A.tail_run, B.head_run);
    r.max_run = std::max({A.max_run, B.max_run, m});
    for (uint32_t k = 2; k <= 4; ++k) {
      Cnt& slot = k == 2 ? r.c2 : k == 3 ? r.c3 : r.c4;
      const Cnt& ca = k == 2 ? A.c2 : k == 3 ? A.c3 : A.c4;
      const Cnt& cb = k == 2 ? B.c2 : k == 3 ? B.c3 : B.c4;
      // merged run replaces the two edge runs
      Cnt total = ca + cb + run_contrib(m, k);
      uint64_t sub = 0;
      Cnt sa = run_contrib(A.tail_run, k), sb = run_contrib(B.head_run, k);
      if (!sa.inf && !sb.inf) sub = sa.v + sb.v;
      slot = total.inf ? total : Cnt::of(total.v - sub);
    }
    r.single_run = A.single_run && B.single_run;
    r.head_run = A.single_run ? m : A.head_run;
    r.tail_run = B.single_run ? m : B.tail_run;
    if (A.single_run && B.single_run) r.head_run = r.tail_run = m;
  } else {
    r.max_run = std::max(A.max_run, B.max_run);
    r.c2 = A.c2 + B.c2;
    r.c3 = A.c3 + B.c3;
    r.c4 = A.c4 + B.c4;
    r.single_run = false;
    r.head_run = A.has_first ? A.head_run : 0;
    r.tail_run = B.has_last ? B.tail_run : 0;
  }
  return r;
}

RunShape rs_prod(const Term& B, const Term& I) {
  RunShape b = run_shape(B);
  RunShape i = run_shape(I);
  if (b.empty || i.empty) return RunShape{};
  auto csize = finite_size(I);
  Cnt copies = csize ? Cnt::of(*csize) : Cnt::infinite();
  bool junctions = b.has_first && b.has_last && !i.c2.zero();
  Cnt njunc = junctions ? i.c2 : Cnt::of(0);
  // a single-run block over a junction-producing index would chain runs; the
  // normalizer rules that shape out (finite blocks are absorbed)
  uint64_t j = 0;
  if (junctions) j = (b.tail_run == kInfLen || b.head_run == kInfLen)
                         ? kInfLen
                         : b.tail_run + b.head_run;
  RunShape r;
  r.empty = false;
  r.has_first = i.has_first && b.has_first;
  r.has_last = i.has_last && b.has_last;
  r.head_run = i.has_first ? b.head_run : 0;
  r.tail_run = i.has_last ? b.tail_run : 0;
  r.single_run = false;
  r.max_run = std::max(b.max_run, junctions ? j : 0);
  for (uint32_t k = 2; k <= 4; ++k) {
    Cnt& slot = k == 2 ? r.c2 : k == 3 ? r.c3 : r.c4;
    const Cnt& cb = k == 2 ? b.c2 : k == 3 ? b.c3 : b.c4;
    Cnt total = cb * copies;
    if (junctions) {
      Cnt gain = run_contrib(j, k) * njunc;
      Cnt loss = (run_contrib(b.tail_run, k) + run_contrib(b.head_run, k)) * njunc;
      total = total + gain;
      if (!total.inf && !loss.inf)
        total = Cnt::of(total.v - loss.v);
      else if (loss.inf && !gain.inf)
        total = Cnt::infinite();  // unreachable: infinite edge runs never junction
    }
    slot = total;
  }
  bool per_copy_pairs = !b.c2.zero();
  r.pairs_up = i.has_last ? b.pairs_up : (per_copy_pairs || (junctions && i.pairs_up));
  r.pairs_down = i.has_first ? b.pairs_down : (per_copy_pairs || (junctions && i.pairs_down));
  r.lim_left =
      b.lim_left || (b.has_first && (i.lim_left || (!b.has_last && !i.c2.zero())));
  r.lim_right =
      b.lim_right || (b.has_last && (i.lim_right || (!b.has_first && !i.c2.zero())));
  return r;
}

RunShape run_shape(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return rs_fin(t.n);
    case TermKind::Omega: {
      RunShape r;
      r.empty = false;
      r.has_first = true;
      r.head_run = kInfLen;
      r.max_run = kInfLen;
      r.c2 = r.c3 = r.c4 = Cnt::infinite();
      r.pairs_up = true;
      return r;
    }
    case TermKind::OmegaStar: {
      RunShape r;
      r.empty = false;
      r.has_last = true;
      r.tail_run = kInfLen;
      r.max_run = kInfLen;
      r.c2 = r.c3 = r.c4 = Cnt::infinite();
      r.pairs_down = true;
      return r;
    }
    case TermKind::Zeta: {
      RunShape r;
      r.empty = false;
      r.max_run = kInfLen;
      r.c2 = r.c3 = r.c4 = Cnt::infinite();
      r.pairs_up = r.pairs_down = true;
      return r;
    }
    case TermKind::Eta: {
      RunShape r;
      r.empty = false;
      r.max_run = 1;
      r.lim_left = r.lim_right = true;
      return r;
    }
    case TermKind::Sum: {
      RunShape acc;
      for (auto& p : t.parts) acc = rs_combine(acc, run_shape(p));
      return acc;
    }
    case TermKind::Prod: return rs_prod(t.block(), t.index());
  }
  return RunShape{};
}

}  // namespace

// ---------------------------------------------------------------------------
// theory generators
// ---------------------------------------------------------------------------

LabeledFiniteOrder gen_T_model(uint32_t m, uint32_t d, uint64_t seed) {
  if (m == 0) throw CodecError("infeasible: need at least one predicate for distinct profiles");
  if (m > 16) throw CodecError("infeasible: too many predicates");
  std::mt19937_64 rng(seed);
  uint32_t total = 1u << m;
  std::vector<uint32_t> all(total);
  for (uint32_t i = 0; i < total; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  std::vector<uint32_t> pts(all.begin(), all.begin() + std::min<uint32_t>(total, 4));
  for (uint32_t round = 0; round < d; ++round) {
    std::vector<uint32_t> next;
    for (size_t i = 0; i < pts.size(); ++i) {
      next.push_back(pts[i]);
      if (i + 1 < pts.size())
        // complete profile group in counter order: any 2^j consecutive
        // members realize every length-j prefix pattern
        for (uint32_t v = 0; v < total; ++v) next.push_back(v);
    }
    pts = std::move(next);
  }
  LabeledFiniteOrder L;
  L.size = (uint32_t)pts.size();
  L.tracked = m;
  L.labels = std::move(pts);
  return L;
}

LabeledFiniteOrder gen_S_model(uint32_t m, uint32_t d, uint64_t seed) {
  LabeledFiniteOrder T = gen_T_model(m, d, seed);
  LabeledFiniteOrder L;
  L.tracked = m;
  L.has_uv = true;
  for (uint32_t i = 0; i < T.size; ++i) {
    L.labels.push_back(T.labels[i]);
    L.uv.push_back(0);  // V point
    L.size++;
    if (d >= 1 && i + 1 < T.size) {
      L.labels.push_back(0);
      L.uv.push_back(1);  // U point between every adjacent pair
      L.size++;
    }
  }
  return L;
}

namespace {

FormulaPtr pattern_formula(const std::vector<bool>& sigma, const Var& z, bool require_v) {
  std::vector<FormulaPtr> cs;
  cs.push_back(f_lt("x", z));
  cs.push_back(f_lt(z, "y"));
  if (require_v) cs.push_back(f_v(z));
  for (uint32_t b = 0; b < sigma.size(); ++b) cs.push_back(f_rel(b, z, !sigma[b]));
  return f_and(std::move(cs));
}

FormulaPtr profiles_differ(uint32_t m) {
  std::vector<FormulaPtr> alts;
  for (uint32_t b = 0; b < m; ++b) {
    alts.push_back(f_and({f_rel(b, "x"), f_rel(b, "y", true)}));
    alts.push_back(f_and({f_rel(b, "x", true), f_rel(b, "y")}));
  }
  return f_or(std::move(alts));
}

std::vector<std::vector<bool>> all_patterns(uint32_t m) {
  std::vector<std::vector<bool>> out;
  for (uint32_t len = 1; len <= m; ++len)
    for (uint32_t v = 0; v < (1u << len); ++v) {
      std::vector<bool> sigma(len);
      for (uint32_t b = 0; b < len; ++b) sigma[b] = (v >> b) & 1;
      out.push_back(std::move(sigma));
    }
  return out;
}

}  // namespace

AxiomReport check_axioms(const LabeledFiniteOrder& L, Theory theory, uint32_t m, uint32_t d) {
  AxiomReport rep;
  bool s_theory = theory == Theory::S;
  uint64_t gap = s_theory ? (1ull << (m + 2)) : (1ull << (m + 1));

  {  // density instances: pairs far enough apart must realize every pattern
    AxiomReport::Line line{s_theory ? "psi*" : "psi", 0, 0};
    if (d >= 1) {
      auto pats = all_patterns(m);
      for (uint32_t i = 0; i < L.size; ++i)
        for (uint32_t j = i + 1; j < L.size; ++j) {
          if ((uint64_t)(j - i) < gap + 1) continue;
          for (auto& sigma : pats) {
            Env env;
            env.vals["x"] = i;
            env.vals["y"] = j;
            line.checked++;
            if (!eval(L, env, f_exists({"z"}, pattern_formula(sigma, "z", s_theory))))
              line.violated++;
          }
        }
    }
    rep.lines.push_back(line);
  }

  {  // distinctness where the profile space permits
    AxiomReport::Line line{s_theory ? "theta*" : "theta", 0, 0};
    uint32_t relevant = 0;
    for (uint32_t i = 0; i < L.size; ++i)
      if (!s_theory || L.is_v(i)) relevant++;
    if (relevant <= (1u << std::min(m, 30u))) {
      auto differ = profiles_differ(m);
      for (uint32_t i = 0; i < L.size; ++i)
        for (uint32_t j = i + 1; j < L.size; ++j) {
          if (s_theory && (!L.is_v(i) || !L.is_v(j))) continue;
          Env env;
          env.vals["x"] = i;
          env.vals["y"] = j;
          line.checked++;
          if (!eval(L, env, differ)) line.violated++;
        }
    }
    rep.lines.push_back(line);
  }

  if (s_theory) {
    {  // U/V partition
      AxiomReport::Line line{"chi", 0, 0};
      auto chi = f_and({f_or({f_u("x"), f_v("x")}), f_or({f_u("x", true), f_v("x", true)})});
      for (uint32_t i = 0; i < L.size; ++i) {
        Env env;
        env.vals["x"] = i;
        line.checked++;
        if (!eval(L, env, chi)) line.violated++;
      }
      rep.lines.push_back(line);
    }
    {  // U points carry no predicates
      AxiomReport::Line line{"eta", 0, 0};
      std::vector<FormulaPtr> none;
      for (uint32_t b = 0; b < m; ++b) none.push_back(f_rel(b, "x", true));
      auto ax = f_or({f_u("x", true), f_and(std::move(none))});
      for (uint32_t i = 0; i < L.size; ++i) {
        Env env;
        env.vals["x"] = i;
        line.checked++;
        if (!eval(L, env, ax)) line.violated++;
      }
      rep.lines.push_back(line);
    }
    {  // U points are dense
      AxiomReport::Line line{"nu", 0, 0};
      if (d >= 1) {
        auto ax = f_exists({"z"}, f_and({f_lt("x", "z"), f_lt("z", "y"), f_u("z")}));
        for (uint32_t i = 0; i < L.size; ++i)
          for (uint32_t j = i + 2; j < L.size; ++j) {
            if (j - i - 1 < 2) continue;
            Env env;
            env.vals["x"] = i;
            env.vals["y"] = j;
            line.checked++;
            if (!eval(L, env, ax)) line.violated++;
          }
      }
      rep.lines.push_back(line);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// the code-block transform
// ---------------------------------------------------------------------------

namespace {

Term phi_tail_block() {
  return sum({eta(), fin(3), eta(), fin(2), eta(), fin(3), eta()});
}

}  // namespace

Term phi_encode(const LabeledFiniteOrder& L) {
  if (L.size == 0) return fin(0);
  std::vector<Term> parts;
  for (uint32_t x = 0; x < L.size; ++x) {
    parts.push_back(fin(4));
    for (uint32_t i = 0; i < L.tracked; ++i) {
      uint64_t code = L.pred_holds(x, i) ? 2 : 3;
      parts.push_back(eta());
      parts.push_back(fin(code));
      parts.push_back(eta());
      parts.push_back(fin(2));
      parts.push_back(eta());
      parts.push_back(fin(3));
    }
    parts.push_back(eta());
    parts.push_back(prod(phi_tail_block(), omega()));
    parts.push_back(fin(4));
  }
  return normalize(sum(std::move(parts)));
}

namespace {

struct PhiElem {
  std::vector<bool> bits;
  size_t left_run_part = 0;   // part index of the boundary run before the codes
  size_t right_run_part = 0;  // part index of the boundary run after them
};

struct PhiParse {
  bool ok = false;
  std::string cond, detail;
  std::vector<PhiElem> elems;
};

PhiParse phi_fail(const std::string& cond, const std::string& detail) {
  PhiParse p;
  p.cond = cond;
  p.detail = detail;
  return p;
}

PhiParse parse_phi(const Term& t) {
  PhiParse out;
  if (t == fin(0)) {
    out.ok = true;
    return out;
  }
  if (t.kind != TermKind::Sum) return phi_fail("1", "no boundary run structure");
  const auto& ps = t.parts;
  size_t i = 0;
  if (!(ps[0].kind == TermKind::Fin && ps[0].n == 4))
    return phi_fail("1", "order does not begin with a 4-run");
  while (i < ps.size()) {
    PhiElem elem;
    elem.left_run_part = i;
    ++i;  // past the boundary run
    // code groups: eta c eta 2 eta 3, repeated, then eta and the infinite tail
    for (;;) {
      if (i >= ps.size() || ps[i].kind != TermKind::Eta)
        return phi_fail("2", "code region is not separated by dense pieces");
      ++i;
      if (i >= ps.size()) return phi_fail("2", "code region ends abruptly");
      if (ps[i].kind == TermKind::Prod) {
        if (!(ps[i].block() == phi_tail_block() && ps[i].index().kind == TermKind::Omega))
          return phi_fail("2", "infinite code tail has the wrong shape");
        ++i;
        break;
      }
      if (ps[i].kind != TermKind::Fin || (ps[i].n != 2 && ps[i].n != 3))
        return phi_fail("2", "expected a 2/3 code run");
      elem.bits.push_back(ps[i].n == 2);
      ++i;
      for (uint64_t sep : {2ull, 3ull}) {
        if (i >= ps.size() || ps[i].kind != TermKind::Eta)
          return phi_fail("2", "code group separator missing");
        ++i;
        if (i >= ps.size() || ps[i].kind != TermKind::Fin || ps[i].n != sep)
          return phi_fail("2", "code group separator run has the wrong length");
        ++i;
      }
    }
    if (i >= ps.size() || ps[i].kind != TermKind::Fin)
      return phi_fail("1", "element block does not close with a boundary run");
    elem.right_run_part = i;
    out.elems.push_back(std::move(elem));
    if (ps[i].n == 4) {
      ++i;
      if (i != ps.size()) return phi_fail("1", "content after the closing 4-run");
      out.ok = true;
      return out;
    }
    if (ps[i].n != 8) return phi_fail("1", "boundary run between blocks is not 4+4");
    // the 8-run closes this block and opens the next
  }
  return phi_fail("1", "ran out of parts inside an element block");
}

}  // namespace

LabeledFiniteOrder phi_decode(const Term& t) {
  PhiParse p = parse_phi(normalize(t));
  if (!p.ok) throw NotInImage(p.cond, p.detail);
  LabeledFiniteOrder L;
  L.size = (uint32_t)p.elems.size();
  uint32_t m = 0;
  for (auto& e : p.elems) m = std::max<uint32_t>(m, (uint32_t)e.bits.size());
  L.tracked = m;
  for (auto& e : p.elems) {
    uint32_t bitsv = 0;
    for (size_t b = 0; b < e.bits.size(); ++b)
      if (e.bits[b]) bitsv |= 1u << b;
    L.labels.push_back(bitsv);
  }
  if (m == 0) L.labels.assign(L.size, 0);
  return L;
}

PhiImageReport image_check_phi_report(const Term& t) {
  PhiParse p = parse_phi(normalize(t));
  PhiImageReport r;
  r.in_image = p.ok;
  r.condition = p.cond;
  r.detail = p.detail;
  return r;
}

bool image_check_phi(const Term& t) { return image_check_phi_report(t).in_image; }

bool no5_check(const Term& t) {
  Term nt = normalize(t);
  PhiParse p = parse_phi(nt);
  if (p.ok) return true;  // the matcher enforces the run discipline
  RunShape rs = run_shape(nt);
  return rs.max_run != kInfLen && rs.max_run <= 4;
}

// ---------------------------------------------------------------------------
// rank-2 interval classes
// ---------------------------------------------------------------------------

bool Eq2Class::same_as(const Eq2Class& o, uint64_t cap) const {
  if (finite != o.finite) return false;
  if (finite) return finite_size == o.finite_size;
  if (head != o.head || tail != o.tail) return false;
  auto capped = [cap](uint64_t v, bool inf) { return inf || v >= cap ? cap : v; };
  uint64_t a4 = capped(c4, i4), b4 = capped(o.c4, o.i4);
  if (a4 != b4) return false;
  if (a4 == cap) return true;  // cascading stops at an unbounded level
  uint64_t a3 = capped(c3, i3), b3 = capped(o.c3, o.i3);
  if (a3 != b3) return false;
  if (a3 == cap) return true;
  return capped(c2, i2) == capped(o.c2, o.i2);
}

std::string Eq2Class::text(uint64_t cap) const {
  if (finite) return "chain(" + std::to_string(finite_size) + ")";
  auto cc = [cap](uint64_t v, bool inf) {
    return inf || v >= cap ? std::string("inf") : std::to_string(v);
  };
  return "m=" + std::to_string(head) + " n=" + std::to_string(tail) + " c4=" + cc(c4, i4) +
         " c3=" + cc(c3, i3) + " c2=" + cc(c2, i2);
}

Eq2Class eq2_interval_class(const Term& t, const PointAddress& p, const PointAddress& q) {
  Term I = subinterval(t, Cut::at(p), Cut::at(q));
  RunShape rs = run_shape(I);
  Eq2Class c;
  if (rs.empty || rs.single_run) {
    c.finite = true;
    c.finite_size = rs.empty ? 0 : rs.head_run;
    return c;
  }
  if (rs.head_run == kInfLen || rs.tail_run == kInfLen)
    throw CodecError("interval has an infinite end run; outside the classifier's case");
  c.head = (uint32_t)rs.head_run;
  c.tail = (uint32_t)rs.tail_run;
  auto strip = [&](const Cnt& total, uint32_t k, uint64_t& v, bool& inf) {
    if (total.inf) {
      inf = true;
      return;
    }
    Cnt hs = run_contrib(rs.head_run, k), ts = run_contrib(rs.tail_run, k);
    v = total.v - hs.v - ts.v;
  };
  strip(rs.c4, 4, c.c4, c.i4);
  strip(rs.c3, 3, c.c3, c.i3);
  strip(rs.c2, 2, c.c2, c.i2);
  return c;
}

DecoratedTerm eq2_label(const Term& t) {
  Term nt = normalize(t);
  PhiParse p = parse_phi(nt);
  if (!p.ok) throw NotInImage(p.cond, p.detail);
  DecoratedTerm d;
  d.term = nt;
  d.kind = "eq2";
  for (auto& e : p.elems) {
    if (nt.kind != TermKind::Sum) break;  // empty image
    const Term& lrun = nt.parts[e.left_run_part];
    d.anchors.push_back(
        PointAddress::in_sum((uint32_t)e.left_run_part, PointAddress::at_nat(lrun.n - 1)));
    d.anchors.push_back(
        PointAddress::in_sum((uint32_t)e.right_run_part, PointAddress::at_nat(0)));
  }
  return d;
}

// ---------------------------------------------------------------------------
// flank analysis for the dense-pair jump
// ---------------------------------------------------------------------------

namespace {

Term eta_jump_block() { return sum({eta(), fin(2), eta()}); }

// what an element just outside sees looking into the term from that side
enum class Prof : uint8_t { PairNow, EtaThenPair, Other };

Prof left_profile(const Term& t);
Prof right_profile(const Term& t);

Prof left_profile(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return t.n >= 2 ? Prof::PairNow : Prof::Other;
    case TermKind::Omega: return Prof::PairNow;
    case TermKind::OmegaStar:
    case TermKind::Zeta: return Prof::Other;
    case TermKind::Eta: return Prof::Other;  // eta alone never reaches a pair
    case TermKind::Sum: {
      const Term& a = t.parts[0];
      if (a.kind == TermKind::Eta) {
        const Term& b = t.parts[1];
        if (b.kind == TermKind::Fin && b.n >= 2) return Prof::EtaThenPair;
        if (b.kind == TermKind::Omega) return Prof::EtaThenPair;
        Prof pb = left_profile(b);
        return pb == Prof::PairNow ? Prof::EtaThenPair : Prof::Other;
      }
      return left_profile(a);
    }
    case TermKind::Prod: {
      RunShape i = run_shape(t.index());
      if (!i.has_first) return Prof::Other;
      return left_profile(t.block());
    }
  }
  return Prof::Other;
}

Prof right_profile(const Term& t) { return left_profile(reverse_term(t)); }

bool edge_eta_top(const Term& t) {
  switch (t.kind) {
    case TermKind::Eta: return true;
    case TermKind::Sum: return edge_eta_top(t.parts.back());
    case TermKind::Prod: return run_shape(t.index()).has_last && edge_eta_top(t.block());
    default: return false;
  }
}
bool edge_eta_bottom(const Term& t) { return edge_eta_top(reverse_term(t)); }

// the segment directly below the top run (used for junction-run flanks)
bool eta_below_top_run(const Term& t) {
  if (t.kind == TermKind::Sum) {
    const Term& last = t.parts.back();
    if (last.kind == TermKind::Fin && t.parts.size() >= 2)
      return edge_eta_top(t.parts[t.parts.size() - 2]);
    return eta_below_top_run(last);
  }
  if (t.kind == TermKind::Prod)
    return run_shape(t.index()).has_last && eta_below_top_run(t.block());
  return false;
}
bool eta_above_bottom_run(const Term& t) { return eta_below_top_run(reverse_term(t)); }

struct EtaCtx {
  bool eta_adjacent = false;           // an eta segment sits directly outside
  Prof scan = Prof::Other;             // what a singleton sees scanning outward
};

// condition 2: every successor pair is flanked by dense pieces on both sides
bool cond2_check(const Term& t, bool left_eta, bool right_eta) {
  switch (t.kind) {
    case TermKind::Fin:
      if (t.n >= 2) return left_eta && right_eta;
      return true;
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Zeta: return false;  // internal pairs with discrete flanks
    case TermKind::Eta: return true;
    case TermKind::Sum: {
      for (size_t i = 0; i < t.parts.size(); ++i) {
        bool le = i == 0 ? left_eta : edge_eta_top(t.parts[i - 1]);
        bool re = i + 1 == t.parts.size() ? right_eta : edge_eta_bottom(t.parts[i + 1]);
        if (!cond2_check(t.parts[i], le, re)) return false;
      }
      return true;
    }
    case TermKind::Prod: {
      const Term& B = t.block();
      RunShape b = run_shape(B);
      RunShape i = run_shape(t.index());
      // junction runs between consecutive copies
      if (b.has_first && b.has_last && !i.c2.zero())
        if (!(eta_below_top_run(B) && eta_above_bottom_run(B))) return false;
      std::vector<bool> lefts, rights;
      if (i.has_first) lefts.push_back(left_eta);
      if (!i.c2.zero()) lefts.push_back(b.has_last ? false : edge_eta_top(B));
      if (i.lim_left || !i.has_first) lefts.push_back(false);
      if (i.has_last) rights.push_back(right_eta);
      if (!i.c2.zero()) rights.push_back(b.has_first ? false : edge_eta_bottom(B));
      if (i.lim_right || !i.has_last) rights.push_back(false);
      // pairs at the copy edges must be flanked under every occurring context
      for (bool le : lefts)
        for (bool re : rights)
          if (!cond2_check(B, le, re)) return false;
      return true;
    }
  }
  return true;
}

// conditions 3/4: successor pairs do not accumulate against any element
enum class Below : uint8_t { WorldEnd, PairFree, Pairs };

bool cond3_check(const Term& t, Below below) {
  RunShape rs = run_shape(t);
  if (rs.has_first && below != Below::PairFree) return false;
  switch (t.kind) {
    case TermKind::Fin:
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Zeta:
    case TermKind::Eta: return true;  // interior points all have local room
    case TermKind::Sum: {
      if (!cond3_check(t.parts[0], below)) return false;
      for (size_t i = 1; i < t.parts.size(); ++i) {
        RunShape prev = run_shape(t.parts[i - 1]);
        Below b = prev.has_last ? Below::PairFree
                                : (prev.pairs_up ? Below::Pairs : Below::PairFree);
        if (!cond3_check(t.parts[i], b)) return false;
      }
      return true;
    }
    case TermKind::Prod: {
      const Term& B = t.block();
      RunShape b = run_shape(B);
      RunShape i = run_shape(t.index());
      if (i.has_first && !cond3_check(B, below)) return false;
      if (!i.c2.zero()) {
        Below bb = b.has_last ? Below::PairFree
                              : (b.pairs_up ? Below::Pairs : Below::PairFree);
        if (!cond3_check(B, bb)) return false;
      }
      if (i.lim_left) {
        bool pairs_below_limit = !b.c2.zero() || (b.has_first && b.has_last && !i.c2.zero());
        if (!cond3_check(B, pairs_below_limit ? Below::Pairs : Below::PairFree)) return false;
      }
      return true;
    }
  }
  return true;
}

// condition 5: singleton blocks reach a pair through a dense piece
bool cond5_check(const Term& t, Prof left_scan, Prof right_scan) {
  auto pair_reachable = [](Prof p) { return p == Prof::PairNow || p == Prof::EtaThenPair; };
  switch (t.kind) {
    case TermKind::Fin:
      if (t.n == 1)  // isolated point: the dense stretch must be nonempty
        return left_scan == Prof::EtaThenPair || right_scan == Prof::EtaThenPair;
      return true;  // members of runs are not singleton blocks
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Zeta: return true;  // no singleton blocks
    case TermKind::Eta: return pair_reachable(left_scan) || pair_reachable(right_scan);
    case TermKind::Sum: {
      for (size_t i = 0; i < t.parts.size(); ++i) {
        Prof ls = i == 0 ? left_scan : right_profile(t.parts[i - 1]);
        Prof rs = i + 1 == t.parts.size() ? right_scan : left_profile(t.parts[i + 1]);
        // an eta part scans through itself first
        if (t.parts[i].kind == TermKind::Eta) {
          bool lok = ls == Prof::PairNow || ls == Prof::EtaThenPair;
          bool rok = rs == Prof::PairNow || rs == Prof::EtaThenPair;
          if (!lok && !rok) return false;
          continue;
        }
        if (!cond5_check(t.parts[i], ls, rs)) return false;
      }
      return true;
    }
    case TermKind::Prod: {
      const Term& B = t.block();
      RunShape i = run_shape(t.index());
      std::vector<Prof> lefts, rights;
      if (i.has_first) lefts.push_back(left_scan);
      if (!i.c2.zero()) lefts.push_back(right_profile(B));
      if (i.lim_left || !i.has_first) lefts.push_back(Prof::Other);
      if (i.has_last) rights.push_back(right_scan);
      if (!i.c2.zero()) rights.push_back(left_profile(B));
      if (i.lim_right || !i.has_last) rights.push_back(Prof::Other);
      for (Prof ls : lefts)
        for (Prof rs : rights)
          if (!cond5_check(B, ls, rs)) return false;
      return true;
    }
  }
  return true;
}

}  // namespace

DecoratedTerm jump_eta(const Term& L) {
  DecoratedTerm d;
  d.term = normalize(prod(eta_jump_block(), normalize(L)));
  d.kind = "eta-jump";
  d.power = 1;
  return d;
}

namespace {

// collect the index order from a flattened jump image; literal eta-2-eta runs
// stand for single-point multipliers
std::optional<Term> eta_unjump(const Term& t) {
  if (t == fin(0)) return fin(0);
  std::vector<Term> parts =
      t.kind == TermKind::Sum ? t.parts : std::vector<Term>{t};
  std::vector<Term> collected;
  size_t i = 0;
  while (i < parts.size()) {
    if (parts[i].kind == TermKind::Prod && parts[i].block() == eta_jump_block()) {
      collected.push_back(parts[i].index());
      ++i;
      continue;
    }
    // literal run: eta, 2, (eta, 2,)* eta  ~  block * k
    if (parts[i].kind == TermKind::Eta) {
      size_t j = i + 1;
      uint64_t k = 0;
      while (j + 1 < parts.size() && parts[j].kind == TermKind::Fin && parts[j].n == 2 &&
             parts[j + 1].kind == TermKind::Eta) {
        ++k;
        j += 2;
      }
      if (k == 0) return std::nullopt;
      collected.push_back(fin(k));
      i = j;
      continue;
    }
    return std::nullopt;
  }
  if (collected.empty()) return std::nullopt;
  return normalize(sum(std::move(collected)));
}

}  // namespace

Term jump_eta_decode(const Term& t) {
  auto r = eta_unjump(normalize(t));
  if (!r) throw NotInImage("shape", "not a dense-pair jump image");
  return *r;
}

EtaImageReport image_check_eta_report(const Term& t) {
  Term nt = normalize(t);
  EtaImageReport r;
  if (nt == fin(0)) {
    r.cond = {true, true, true, true, true};
    r.ok = true;
    return r;
  }
  RunShape rs = run_shape(nt);
  r.cond[0] = rs.max_run != kInfLen && rs.max_run <= 2;
  r.cond[1] = cond2_check(nt, false, false);
  r.cond[2] = cond3_check(nt, Below::WorldEnd);
  r.cond[3] = cond3_check(reverse_term(nt), Below::WorldEnd);
  r.cond[4] = cond5_check(nt, Prof::Other, Prof::Other);
  r.ok = r.cond[0] && r.cond[1] && r.cond[2] && r.cond[3] && r.cond[4];
  return r;
}

bool image_check_eta(const Term& t) { return image_check_eta_report(t).ok; }

// ---------------------------------------------------------------------------
// the discrete-power jump
// ---------------------------------------------------------------------------

DecoratedTerm jump_zeta(const Term& L, uint32_t k) {
  if (k == 0) throw UnsupportedJump("jump power must be at least 1");
  DecoratedTerm d;
  d.term = normalize(prod(zeta_pow(k), normalize(L)));
  d.kind = "zeta-jump";
  d.power = k;
  return d;
}

namespace {

Term zeta_peel(const Term& t) {
  if (t == fin(0)) return fin(0);
  if (t.kind == TermKind::Zeta) return fin(1);
  if (t.kind == TermKind::Prod && t.block().kind == TermKind::Zeta) return t.index();
  if (t.kind == TermKind::Sum) {
    std::vector<Term> parts;
    for (auto& p : t.parts) parts.push_back(zeta_peel(p));
    return normalize(sum(std::move(parts)));
  }
  throw NotInImage("shape", "not a discrete-power jump image");
}

bool all_blocks_zeta(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return t.n == 0;
    case TermKind::Zeta: return true;
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Eta: return false;
    case TermKind::Sum:
      for (auto& p : t.parts)
        if (!all_blocks_zeta(p)) return false;
      return true;
    case TermKind::Prod: return all_blocks_zeta(t.block());
  }
  return false;
}

}  // namespace

Term jump_zeta_decode(const Term& t, uint32_t k) {
  if (k == 0) throw UnsupportedJump("jump power must be at least 1");
  Term cur = normalize(t);
  for (uint32_t i = 0; i < k; ++i) cur = zeta_peel(cur);
  return cur;
}

bool image_check_zeta(const Term& t, uint32_t k) {
  if (k != 1)
    throw UnsupportedJump("image checking beyond the first power needs deeper block relations");
  return all_blocks_zeta(normalize(t));
}

// ---------------------------------------------------------------------------
// decorated-term and corpus serialization
// ---------------------------------------------------------------------------

std::string DecoratedTerm::annotation_json() const {
  nlohmann::json j;
  j["term"] = to_text(term);
  nlohmann::json ann;
  ann["kind"] = kind;
  if (power) ann["power"] = power;
  if (!anchors.empty()) {
    nlohmann::json as = nlohmann::json::array();
    for (auto& a : anchors) as.push_back(address_to_text(a));
    ann["anchors"] = as;
  }
  j["annotations"] = ann;
  return j.dump();
}

std::string labeled_order_to_json(const LabeledFiniteOrder& L) {
  nlohmann::json j;
  j["size"] = L.size;
  j["m"] = L.tracked;
  nlohmann::json profiles = nlohmann::json::array();
  for (uint32_t i = 0; i < L.size; ++i) {
    std::string bits;
    for (uint32_t b = 0; b < L.tracked; ++b) bits += L.pred_holds(i, b) ? '1' : '0';
    profiles.push_back(bits);
  }
  j["profiles"] = profiles;
  if (L.has_uv) {
    nlohmann::json uv = nlohmann::json::array();
    for (uint32_t i = 0; i < L.size; ++i) uv.push_back(L.uv[i] ? "u" : "v");
    j["uv"] = uv;
  }
  return j.dump();
}

LabeledFiniteOrder labeled_order_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  LabeledFiniteOrder L;
  L.size = j.at("size").get<uint32_t>();
  L.tracked = j.at("m").get<uint32_t>();
  for (auto& p : j.at("profiles")) {
    std::string bits = p.get<std::string>();
    uint32_t v = 0;
    for (size_t b = 0; b < bits.size(); ++b)
      if (bits[b] == '1') v |= 1u << b;
    L.labels.push_back(v);
  }
  if ((uint32_t)L.labels.size() != L.size) throw CodecError("profile count mismatch");
  if (j.contains("uv")) {
    L.has_uv = true;
    for (auto& u : j.at("uv")) L.uv.push_back(u.get<std::string>() == "u" ? 1 : 0);
    if ((uint32_t)L.uv.size() != L.size) throw CodecError("uv count mismatch");
  }
  return L;
}

}  // namespace bfo
