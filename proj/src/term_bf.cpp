#include "bfo/term_bf.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace bfo {

namespace {

// ---------------------------------------------------------------------------
// Cut families. A point cut of a term order splits it into (left, right);
// the cuts of each constructor form finitely many families, parameterized by
// positions inside w / w* / finite chains. `make` instantiates one cut.
// ---------------------------------------------------------------------------

struct CutFamily {
  struct Param {
    uint64_t bound = 0;  // 0 = unbounded; otherwise values range over [0, bound)
  };
  std::vector<Param> params;
  std::function<std::pair<Term, Term>(const std::vector<uint64_t>&)> make;
};

std::vector<CutFamily> cut_families(const Term& t) {
  std::vector<CutFamily> out;
  switch (t.kind) {
    case TermKind::Fin: {
      if (t.n == 0) break;
      CutFamily f;
      f.params.push_back({t.n});
      uint64_t n = t.n;
      f.make = [n](const std::vector<uint64_t>& p) {
        return std::make_pair(fin(p[0]), fin(n - 1 - p[0]));
      };
      out.push_back(std::move(f));
      break;
    }
    case TermKind::Omega: {
      CutFamily f;
      f.params.push_back({0});
      f.make = [](const std::vector<uint64_t>& p) { return std::make_pair(fin(p[0]), omega()); };
      out.push_back(std::move(f));
      break;
    }
    case TermKind::OmegaStar: {
      CutFamily f;
      f.params.push_back({0});
      f.make = [](const std::vector<uint64_t>& p) {
        return std::make_pair(omega_star(), fin(p[0]));
      };
      out.push_back(std::move(f));
      break;
    }
    case TermKind::Zeta: {
      CutFamily f;
      f.make = [](const std::vector<uint64_t>&) { return std::make_pair(omega_star(), omega()); };
      out.push_back(std::move(f));
      break;
    }
    case TermKind::Eta: {
      CutFamily f;
      f.make = [](const std::vector<uint64_t>&) { return std::make_pair(eta(), eta()); };
      out.push_back(std::move(f));
      break;
    }
    case TermKind::Sum: {
      for (size_t i = 0; i < t.parts.size(); ++i) {
        std::vector<Term> prefix(t.parts.begin(), t.parts.begin() + i);
        std::vector<Term> suffix(t.parts.begin() + i + 1, t.parts.end());
        for (auto& inner : cut_families(t.parts[i])) {
          CutFamily f;
          f.params = inner.params;
          auto mk = inner.make;
          f.make = [mk, prefix, suffix](const std::vector<uint64_t>& p) {
            auto [l, r] = mk(p);
            std::vector<Term> ls = prefix;
            ls.push_back(l);
            std::vector<Term> rs{r};
            rs.insert(rs.end(), suffix.begin(), suffix.end());
            return std::make_pair(normalize(sum(ls)), normalize(sum(rs)));
          };
          out.push_back(std::move(f));
        }
      }
      break;
    }
    case TermKind::Prod: {
      Term B = t.block();
      for (auto& fi : cut_families(t.index())) {
        for (auto& fb : cut_families(B)) {
          CutFamily f;
          f.params = fi.params;
          f.params.insert(f.params.end(), fb.params.begin(), fb.params.end());
          auto mki = fi.make;
          auto mkb = fb.make;
          size_t ni = fi.params.size();
          f.make = [mki, mkb, ni, B](const std::vector<uint64_t>& p) {
            std::vector<uint64_t> pi(p.begin(), p.begin() + ni);
            std::vector<uint64_t> pb(p.begin() + ni, p.end());
            auto [il, ir] = mki(pi);
            auto [bl, br] = mkb(pb);
            Term left = normalize(sum({normalize(prod(B, il)), bl}));
            Term right = normalize(sum({br, normalize(prod(B, ir))}));
            return std::make_pair(left, right);
          };
          out.push_back(std::move(f));
        }
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Relation engine. le(U, V, r) decides U <=_r V coinductively:
//   U <=_r V  iff  V <=_{r-1} U  (the empty move) and for every point cut
//   (P_V, Q_V) of V there is a cut (P_U, Q_U) of U with P_V <=_{r-1} P_U and,
//   recursively at the same rank, Q_U <=_r Q_V on the tails.
// Cycles through infinite tails take the coinductive (greatest fixed point)
// reading: a revisited in-progress query counts as true, and any query that
// comes out false is remembered and the evaluation restarted until stable.
// ---------------------------------------------------------------------------

struct BudgetExceeded {};

struct EngineCache {
  std::unordered_set<std::string> disproved;
  std::unordered_set<std::string> confirmed;
  std::unordered_map<std::string, std::vector<CutFamily>> families;
};

struct RelEngine {
  TermBfConfig cfg;
  EngineCache& cache;
  std::unordered_map<std::string, int8_t> pass_state;  // 1 true, 2 in-progress
  uint64_t steps = 0;
  uint32_t depth = 0;

  RelEngine(const TermBfConfig& c, EngineCache& ca) : cfg(c), cache(ca) {}

  static std::string key(const std::string& u, const std::string& v, uint32_t r) {
    return u + " <=" + std::to_string(r) + " " + v;
  }

  const std::vector<CutFamily>& families(const Term& t, const std::string& text) {
    auto it = cache.families.find(text);
    if (it != cache.families.end()) return it->second;
    return cache.families.emplace(text, cut_families(t)).first->second;
  }

  std::vector<uint64_t> forall_samples(const CutFamily::Param& p) const {
    std::vector<uint64_t> vs;
    uint64_t w = cfg.param_window;
    if (p.bound) {
      uint64_t b = p.bound;
      if (b <= w + 5) {
        for (uint64_t v = 0; v < b; ++v) vs.push_back(v);
      } else {
        for (uint64_t v = 0; v <= w; ++v) vs.push_back(v);
        vs.push_back(b - 3);
        vs.push_back(b - 2);
        vs.push_back(b - 1);
      }
    } else {
      for (uint64_t v = 0; v <= w; ++v) vs.push_back(v);
      vs.push_back(w + 5);
      vs.push_back(w + 13);
    }
    return vs;
  }

  std::vector<uint64_t> exists_candidates(const CutFamily::Param& p,
                                          const std::vector<uint64_t>& seen) const {
    std::set<uint64_t> s;
    for (uint64_t v = 0; v <= cfg.param_window; ++v) s.insert(v);
    for (uint64_t v : seen)
      for (int d = -3; d <= 3; ++d) {
        long long x = (long long)v + d;
        if (x >= 0) s.insert((uint64_t)x);
      }
    if (p.bound) {
      for (uint64_t d = 1; d <= 4 && d <= p.bound; ++d) s.insert(p.bound - d);
      std::vector<uint64_t> vs;
      for (uint64_t v : s)
        if (v < p.bound) vs.push_back(v);
      return vs;
    }
    return {s.begin(), s.end()};
  }

  // rank 1 in closed form: U realizes every finite pattern of V
  static bool le1(const Term& U, const Term& V) {
    auto sv = finite_size(V);
    if (!sv) return !finite_size(U).has_value();
    auto su = finite_size(U);
    return !su || *su >= *sv;
  }

  bool le(const Term& U, const Term& V, uint32_t r) {
    if (r == 0) return true;
    if (r == 1) return le1(U, V);
    std::string ut = to_text(U), vt = to_text(V);
    if (ut == vt) return true;
    std::string k = key(ut, vt, r);
    if (cache.disproved.count(k)) return false;
    if (cache.confirmed.count(k)) return true;
    auto it = pass_state.find(k);
    if (it != pass_state.end()) return true;  // settled true or coinductive in-progress
    pass_state[k] = 2;

    if (++depth > cfg.depth_budget) throw BudgetExceeded{};
    bool ok = body(U, ut, V, vt, r);
    --depth;
    if (!ok) {
      cache.disproved.insert(k);
      pass_state.erase(k);
      return false;
    }
    pass_state[k] = 1;
    return true;
  }

  bool body(const Term& U, const std::string& ut, const Term& V, const std::string& vt,
            uint32_t r) {
    if (++steps > cfg.step_budget) throw BudgetExceeded{};
    if (!le(V, U, r - 1)) return false;  // spoiler's empty move
    // families(...) references stay valid: rehashing moves buckets, not values
    const auto& famV = families(V, vt);
    const auto& famU = families(U, ut);
    for (const auto& fv : famV) {
      std::vector<std::vector<uint64_t>> assignments{{}};
      for (const auto& p : fv.params) {
        std::vector<std::vector<uint64_t>> next;
        for (auto& base : assignments)
          for (uint64_t v : forall_samples(p)) {
            auto e = base;
            e.push_back(v);
            next.push_back(std::move(e));
          }
        assignments = std::move(next);
        if (assignments.size() > 40000) throw BudgetExceeded{};
      }
      for (const auto& pv : assignments) {
        auto [PV, QV] = fv.make(pv);
        if (!find_reply(famU, PV, QV, pv, r)) return false;
      }
    }
    return true;
  }

  bool find_reply(const std::vector<CutFamily>& famU, const Term& PV, const Term& QV,
                  const std::vector<uint64_t>& pv, uint32_t r) {
    for (const auto& fu : famU) {
      std::vector<std::vector<uint64_t>> assignments{{}};
      for (const auto& p : fu.params) {
        std::vector<std::vector<uint64_t>> next;
        for (auto& base : assignments)
          for (uint64_t v : exists_candidates(p, pv)) {
            auto e = base;
            e.push_back(v);
            next.push_back(std::move(e));
          }
        assignments = std::move(next);
        if (assignments.size() > 40000) throw BudgetExceeded{};
      }
      for (const auto& pu : assignments) {
        auto [PU, QU] = fu.make(pu);
        if (++steps > cfg.step_budget) throw BudgetExceeded{};
        if (le(PV, PU, r - 1) && le(QU, QV, r)) return true;
      }
    }
    return false;
  }
};

EngineCache& global_cache() {
  static EngineCache c;
  return c;
}

// decisions against the shared cache serialize; independent queries from
// several threads stay correct, they just take the lock in turn
std::mutex& global_cache_mutex() {
  static std::mutex m;
  return m;
}

bool decide(const Term& U, const Term& V, uint32_t r, const TermBfConfig& cfg,
            EngineCache& cache) {
  for (;;) {
    RelEngine eng(cfg, cache);
    size_t before = cache.disproved.size();
    bool result = eng.le(U, V, r);
    if (cache.disproved.size() == before) {
      // converged pass: every in-pass "true" is a stable fixed-point value
      for (auto& [k, st] : eng.pass_state)
        if (st == 1) cache.confirmed.insert(k);
      return result;
    }
  }
}

}  // namespace

Verdict bf_term(const Term& t1, const Term& t2, uint32_t rank, const TermBfConfig& cfg) {
  Term U = normalize(t1), V = normalize(t2);
  try {
    TermBfConfig def;
    bool default_cfg = cfg.param_window == def.param_window &&
                       cfg.step_budget == def.step_budget &&
                       cfg.depth_budget == def.depth_budget;
    if (default_cfg) {
      std::lock_guard<std::mutex> lock(global_cache_mutex());
      return decide(U, V, rank, cfg, global_cache()) ? Verdict::LE : Verdict::NLE;
    }
    EngineCache local;
    return decide(U, V, rank, cfg, local) ? Verdict::LE : Verdict::NLE;
  } catch (const BudgetExceeded&) {
    return Verdict::Unknown;
  }
}

// ---------------------------------------------------------------------------
// NClass interning
// ---------------------------------------------------------------------------

ClassTable::ClassTable(TermBfConfig cfg) : cfg_(cfg) {}

const Term& ClassTable::representative(const NClass& c) const {
  return reps_.at(c.rank).at(c.id);
}

size_t ClassTable::table_size(uint32_t rank) const {
  auto it = reps_.find(rank);
  return it == reps_.end() ? 0 : it->second.size();
}

namespace {
uint64_t fnv(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}
}  // namespace

uint64_t ClassTable::signature_hash(const Term& rep, uint32_t rank) {
  // Descriptive data in the shape of the characteristic: rank 0 is a capped
  // size summary, rank k+1 hashes the sampled set of single-cut signature
  // pairs of rank-k class ids. Equality of classes is certified by the
  // engine, never by this hash.
  if (rank == 0) {
    auto sz = finite_size(rep);
    uint64_t capped = sz ? std::min<uint64_t>(*sz, 8) : 9;
    return fnv(0x517cc1b727220a95ull, capped);
  }
  std::set<std::pair<uint32_t, uint32_t>> pairs;
  for (auto& fam : cut_families(rep)) {
    std::vector<std::vector<uint64_t>> assignments{{}};
    for (const auto& p : fam.params) {
      std::vector<std::vector<uint64_t>> next;
      uint64_t hi = p.bound ? std::min<uint64_t>(p.bound, 5) : 5;
      for (auto& base : assignments)
        for (uint64_t v = 0; v < hi; ++v) {
          auto e = base;
          e.push_back(v);
          next.push_back(std::move(e));
        }
      assignments = std::move(next);
    }
    for (auto& pv : assignments) {
      auto [l, r] = fam.make(pv);
      pairs.emplace(intern(l, rank - 1).id, intern(r, rank - 1).id);
    }
  }
  uint64_t h = fnv(0x243f6a8885a308d3ull, rank);
  for (auto& [l, r] : pairs) h = fnv(fnv(h, l), r);
  return h;
}

NClass ClassTable::intern(const Term& t, uint32_t rank) {
  Term nt = normalize(t);
  std::string text = to_text(nt);
  auto mk = std::make_pair(rank, text);
  if (auto it = by_text_.find(mk); it != by_text_.end())
    return NClass{rank, it->second, hashes_.at({rank, it->second})};
  auto& reps = reps_[rank];
  auto nt_size = finite_size(nt);
  for (uint32_t id = 0; id < reps.size(); ++id) {
    // cheap rank-aware filter before the two certified checks
    if (rank >= 1) {
      auto rs = finite_size(reps[id]);
      if (nt_size.has_value() != rs.has_value()) continue;
      if (nt_size && *nt_size != *rs) continue;
    }
    if (rank >= 2) {
      if (first_point(nt).has_value() != first_point(reps[id]).has_value()) continue;
      if (last_point(nt).has_value() != last_point(reps[id]).has_value()) continue;
    }
    Verdict a = bf_term(nt, reps[id], rank, cfg_);
    if (a == Verdict::Unknown) throw StabilizationFailure("budget exhausted interning " + text);
    if (a != Verdict::LE) continue;
    Verdict b = bf_term(reps[id], nt, rank, cfg_);
    if (b == Verdict::Unknown) throw StabilizationFailure("budget exhausted interning " + text);
    if (b == Verdict::LE) {
      by_text_.emplace(mk, id);
      return NClass{rank, id, hashes_.at({rank, id})};
    }
  }
  uint32_t id = (uint32_t)reps.size();
  reps.push_back(nt);
  by_text_.emplace(mk, id);
  uint64_t h = signature_hash(nt, rank);
  hashes_[{rank, id}] = h;
  return NClass{rank, id, h};
}

NClass ClassTable::class_of(const Term& t, uint32_t rank) {
  Term nt = normalize(t);
  if (nt.kind == TermKind::Prod) {
    const Term& B = nt.block();
    const Term& I = nt.index();
    bool omega_like = I.kind == TermKind::Omega || I.kind == TermKind::OmegaStar ||
                      I.kind == TermKind::Zeta;
    if (omega_like) {
      // iterate finite powers until the class is stationary, then certify the
      // candidate against the product term itself
      NClass prev = intern(normalize(prod(B, fin(1))), rank);
      for (uint32_t k = 2; k <= cfg_.stabilization_budget + 1; ++k) {
        NClass cur = intern(normalize(prod(B, fin(k))), rank);
        if (cur.id == prev.id) {
          const Term& cand = representative(cur);
          if (bf_term(nt, cand, rank, cfg_) == Verdict::LE &&
              bf_term(cand, nt, rank, cfg_) == Verdict::LE)
            return intern(nt, rank);
          break;
        }
        prev = cur;
      }
    }
    if (I.kind == TermKind::Eta) {
      // alternating shuffle approximants L_{k+1} = L_k + B + L_k
      Term L = B;
      NClass prev = intern(L, rank);
      uint32_t stable = 0;
      for (uint32_t k = 0; k < cfg_.stabilization_budget; ++k) {
        L = normalize(sum({L, B, L}));
        NClass cur = intern(L, rank);
        stable = (cur.id == prev.id) ? stable + 1 : 0;
        prev = cur;
        if (stable >= 2) {
          NClass x = prev;
          NClass bx = class_sum(intern(B, rank), x, rank);
          NClass xbx = class_sum(x, bx, rank);
          if (xbx.id == x.id && bf_term(nt, representative(x), rank, cfg_) == Verdict::LE &&
              bf_term(representative(x), nt, rank, cfg_) == Verdict::LE)
            return intern(nt, rank);
          break;
        }
      }
    }
  }
  return intern(nt, rank);
}

NClass ClassTable::class_sum(const NClass& a, const NClass& b, uint32_t rank) {
  if (a.rank != rank || b.rank != rank) throw StabilizationFailure("class rank mismatch");
  Term s = normalize(sum({representative(a), representative(b)}));
  return intern(s, rank);
}

}  // namespace bfo
