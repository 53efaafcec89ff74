#include "bfo/bf.hpp"

#include <algorithm>
#include <mutex>
#include <unordered_map>

namespace bfo {

namespace {

struct StructRegistry {
  std::unordered_map<std::string, uint32_t> ids;
  std::vector<LabeledFiniteOrder> structs;

  uint32_t intern(const LabeledFiniteOrder& m) {
    auto k = m.key();
    auto it = ids.find(k);
    if (it != ids.end()) return it->second;
    uint32_t id = (uint32_t)structs.size();
    structs.push_back(m);
    ids.emplace(std::move(k), id);
    return id;
  }
};

StructRegistry& registry() {
  static StructRegistry r;
  return r;
}

std::unordered_map<std::string, Verdict>& memo() {
  static std::unordered_map<std::string, Verdict> m;
  return m;
}

// all writers insert equal values for equal keys, so a coarse lock around the
// shared tables is enough for concurrent callers
std::mutex& table_mutex() {
  static std::mutex m;
  return m;
}

uint32_t label_bits(const LabeledFiniteOrder& m, uint32_t e) {
  return m.tracked ? m.labels[e] : 0;
}

int sgn(int64_t v) { return v < 0 ? -1 : v > 0 ? 1 : 0; }

bool point_compatible(const LabeledFiniteOrder& M, uint32_t x, const LabeledFiniteOrder& N,
                      uint32_t y) {
  if (label_bits(M, x) != label_bits(N, y)) return false;
  bool mu = M.is_u(x), nu = N.is_u(y);
  bool mv = M.is_v(x), nv = N.is_v(y);
  return mu == nu && mv == nv;
}

}  // namespace

bool atomic_type_equal(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                       const LabeledFiniteOrder& N, const std::vector<uint32_t>& b) {
  if (a.size() != b.size()) throw TupleError("tuple length mismatch");
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= M.size || b[i] >= N.size) throw TupleError("element out of range");
    if (!point_compatible(M, a[i], N, b[i])) return false;
    for (size_t j = 0; j < i; ++j)
      if (sgn((int64_t)a[i] - a[j]) != sgn((int64_t)b[i] - b[j])) return false;
  }
  return true;
}

namespace {

// Pairs (a_i, b_i) sorted and deduplicated; validity relies on atomic-type
// agreement having been checked (so sorting by a also sorts b).
void canonical_pairs(std::vector<uint32_t>& a, std::vector<uint32_t>& b) {
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

std::string make_key(uint32_t idM, const std::vector<uint32_t>& a, uint32_t idN,
                     const std::vector<uint32_t>& b, uint32_t rank) {
  std::string k;
  k.reserve(16 + 4 * (a.size() + b.size()));
  k += std::to_string(idM);
  k += '|';
  for (auto x : a) {
    k += std::to_string(x);
    k += ',';
  }
  k += '|';
  k += std::to_string(idN);
  k += '|';
  for (auto x : b) {
    k += std::to_string(x);
    k += ',';
  }
  k += '|';
  k += std::to_string(rank);
  return k;
}

struct Solver {
  const GameConfig& cfg;

  bool solve(const LabeledFiniteOrder& M, std::vector<uint32_t> a, const LabeledFiniteOrder& N,
             std::vector<uint32_t> b, uint32_t rank) {
    if (!atomic_type_equal(M, a, N, b)) return false;
    if (rank == 0) return true;
    canonical_pairs(a, b);
    uint32_t idM, idN;
    {
      std::lock_guard<std::mutex> lock(table_mutex());
      idM = registry().intern(M);
      idN = registry().intern(N);
    }
    std::string key = make_key(idM, a, idN, b, rank);
    {
      std::lock_guard<std::mutex> lock(table_mutex());
      auto it = memo().find(key);
      if (it != memo().end()) return it->second == Verdict::LE;
    }

    bool ok;
    if (cfg.spoiler.kind == SpoilerMode::FullDomain) {
      std::vector<uint32_t> d(N.size);
      for (uint32_t i = 0; i < N.size; ++i) d[i] = i;
      ok = exists_reply(M, a, N, b, d, rank);
    } else {
      ok = true;
      std::vector<uint32_t> d;
      uint32_t maxlen = std::min<uint32_t>(cfg.spoiler.len, N.size);
      ok = all_tuples_answered(M, a, N, b, d, maxlen, rank);
    }
    {
      std::lock_guard<std::mutex> lock(table_mutex());
      if (memo().size() < cfg.memo_budget)
        memo().emplace(std::move(key), ok ? Verdict::LE : Verdict::NLE);
    }
    return ok;
  }

  // every ascending distinct spoiler tuple of length <= maxlen has a reply
  bool all_tuples_answered(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                           const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                           std::vector<uint32_t>& d, uint32_t maxlen, uint32_t rank) {
    if (!exists_reply(M, a, N, b, d, rank)) return false;
    if (d.size() == maxlen) return true;
    uint32_t lo = d.empty() ? 0 : d.back() + 1;
    for (uint32_t x = lo; x < N.size; ++x) {
      d.push_back(x);
      bool ok = all_tuples_answered(M, a, N, b, d, maxlen, rank);
      d.pop_back();
      if (!ok) return false;
    }
    return true;
  }

  // exists c with (N, b+d) <=_{rank-1} (M, a+c)
  bool exists_reply(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                    const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                    const std::vector<uint32_t>& d, uint32_t rank) {
    std::vector<uint32_t> c;
    return try_reply(M, a, N, b, d, c, rank);
  }

  bool try_reply(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                 const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                 const std::vector<uint32_t>& d, std::vector<uint32_t>& c, uint32_t rank) {
    if (c.size() == d.size()) {
      std::vector<uint32_t> nb = b, ma = a;
      nb.insert(nb.end(), d.begin(), d.end());
      ma.insert(ma.end(), c.begin(), c.end());
      return solve(N, nb, M, ma, rank - 1);
    }
    size_t j = c.size();
    for (uint32_t x = 0; x < M.size; ++x) {
      if (!point_compatible(M, x, N, d[j])) continue;
      bool fits = true;
      for (size_t i = 0; fits && i < a.size(); ++i)
        fits = sgn((int64_t)x - a[i]) == sgn((int64_t)d[j] - b[i]);
      for (size_t i = 0; fits && i < j; ++i)
        fits = sgn((int64_t)x - c[i]) == sgn((int64_t)d[j] - d[i]);
      if (!fits) continue;
      c.push_back(x);
      if (try_reply(M, a, N, b, d, c, rank)) return true;
      c.pop_back();
    }
    return false;
  }
};

// Trace reconstruction for verdicts; spoiler tuples are enumerated ascending
// by length then lexicographically, so traces are reproducible.
struct Tracer {
  Solver& solver;

  void build(const LabeledFiniteOrder& M, std::vector<uint32_t> a, const LabeledFiniteOrder& N,
             std::vector<uint32_t> b, uint32_t rank, bool le, std::vector<GameStep>& out) {
    if (rank == 0 || out.size() >= 16) return;
    if (le) {
      // one winning line against the full-domain tuple; try_reply leaves the
      // successful reply in c
      std::vector<uint32_t> d(N.size);
      for (uint32_t i = 0; i < N.size; ++i) d[i] = i;
      std::vector<uint32_t> c;
      if (!solver.try_reply(M, a, N, b, d, c, rank)) return;
      out.push_back(GameStep{d, c, true});
      std::vector<uint32_t> nb = b, ma = a;
      nb.insert(nb.end(), d.begin(), d.end());
      ma.insert(ma.end(), c.begin(), c.end());
      build(N, nb, M, ma, rank - 1, true, out);
      return;
    }
    // minimal defeating spoiler tuple
    for (uint32_t len = 1; len <= N.size; ++len) {
      std::vector<uint32_t> d;
      if (find_defeating(M, a, N, b, d, len, rank, out)) return;
    }
  }

  bool find_defeating(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                      const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                      std::vector<uint32_t>& d, uint32_t len, uint32_t rank,
                      std::vector<GameStep>& out) {
    if (d.size() == len) {
      std::vector<uint32_t> c;
      if (solver.try_reply(M, a, N, b, d, c, rank)) return false;
      // best reply for the trace: the first atomically consistent one
      c.clear();
      bool any = first_consistent(M, a, N, b, d, c);
      out.push_back(GameStep{d, c, any});
      if (any) {
        std::vector<uint32_t> nb = b, ma = a;
        nb.insert(nb.end(), d.begin(), d.end());
        ma.insert(ma.end(), c.begin(), c.end());
        build(N, nb, M, ma, rank - 1, false, out);
      }
      return true;
    }
    uint32_t lo = d.empty() ? 0 : d.back() + 1;
    for (uint32_t x = lo; x < N.size; ++x) {
      d.push_back(x);
      if (find_defeating(M, a, N, b, d, len, rank, out)) return true;
      d.pop_back();
    }
    return false;
  }

  bool first_consistent(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                        const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                        const std::vector<uint32_t>& d, std::vector<uint32_t>& c) {
    if (c.size() == d.size()) return true;
    size_t j = c.size();
    for (uint32_t x = 0; x < M.size; ++x) {
      if (!point_compatible(M, x, N, d[j])) continue;
      bool fits = true;
      for (size_t i = 0; fits && i < a.size(); ++i)
        fits = sgn((int64_t)x - a[i]) == sgn((int64_t)d[j] - b[i]);
      for (size_t i = 0; fits && i < j; ++i)
        fits = sgn((int64_t)x - c[i]) == sgn((int64_t)d[j] - d[i]);
      if (!fits) continue;
      c.push_back(x);
      if (first_consistent(M, a, N, b, d, c)) return true;
      c.pop_back();
    }
    return false;
  }
};

}  // namespace

BfResult bf_finite(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                   const LabeledFiniteOrder& N, const std::vector<uint32_t>& b, uint32_t rank,
                   const GameConfig& cfg) {
  Solver s{cfg};
  BfResult r;
  bool le = s.solve(M, a, N, b, rank);
  r.verdict = le ? Verdict::LE : Verdict::NLE;
  if (cfg.trace) {
    Tracer tracer{s};
    if (!le && !atomic_type_equal(M, a, N, b))
      r.trace.push_back(GameStep{{}, {}, false});  // tuples already disagree
    else
      tracer.build(M, a, N, b, rank, le, r.trace);
  }
  return r;
}

Verdict bf_finite_by_intervals(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                               const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                               uint32_t rank, const GameConfig& cfg) {
  if (!M.pure() || !N.pure()) throw TupleError("interval route needs pure linear orders");
  if (a.size() != b.size()) throw TupleError("tuple length mismatch");
  for (size_t i = 1; i < a.size(); ++i)
    if (a[i] <= a[i - 1] || b[i] <= b[i - 1]) throw TupleError("tuples must be increasing");
  for (auto x : a)
    if (x >= M.size) throw TupleError("element out of range");
  for (auto x : b)
    if (x >= N.size) throw TupleError("element out of range");

  size_t k = a.size();
  for (size_t i = 0; i <= k; ++i) {
    int64_t mlo = (i == 0) ? -1 : (int64_t)a[i - 1];
    int64_t mhi = (i == k) ? (int64_t)M.size : (int64_t)a[i];
    int64_t nlo = (i == 0) ? -1 : (int64_t)b[i - 1];
    int64_t nhi = (i == k) ? (int64_t)N.size : (int64_t)b[i];
    auto mi = LabeledFiniteOrder::chain((uint32_t)std::max<int64_t>(0, mhi - mlo - 1));
    auto ni = LabeledFiniteOrder::chain((uint32_t)std::max<int64_t>(0, nhi - nlo - 1));
    Solver s{cfg};
    if (!s.solve(mi, {}, ni, {}, rank)) return Verdict::NLE;
  }
  return Verdict::LE;
}

Partition bf_classes(const std::vector<LabeledFiniteOrder>& structures, uint32_t rank,
                     const GameConfig& cfg) {
  Partition p;
  p.class_of.assign(structures.size(), 0);
  Solver s{cfg};
  for (size_t i = 0; i < structures.size(); ++i) {
    bool placed = false;
    for (size_t cid = 0; cid < p.representative.size() && !placed; ++cid) {
      const auto& rep = structures[p.representative[cid]];
      if (s.solve(structures[i], {}, rep, {}, rank) && s.solve(rep, {}, structures[i], {}, rank)) {
        p.class_of[i] = (uint32_t)cid;
        placed = true;
      }
    }
    if (!placed) {
      p.class_of[i] = (uint32_t)p.representative.size();
      p.representative.push_back(i);
    }
  }
  // canonical representative: least key within the class
  for (size_t cid = 0; cid < p.representative.size(); ++cid) {
    for (size_t i = 0; i < structures.size(); ++i)
      if (p.class_of[i] == cid &&
          structures[i].key() < structures[p.representative[cid]].key())
        p.representative[cid] = i;
  }
  return p;
}

uint32_t scott_rank_finite(const LabeledFiniteOrder& M, const GameConfig& cfg) {
  // distinct increasing tuples of every length (duplicated or permuted
  // coordinates reduce to these)
  std::vector<std::vector<uint32_t>> tuples{{}};
  std::vector<uint32_t> cur;
  auto rec = [&](auto&& self, uint32_t lo) -> void {
    for (uint32_t x = lo; x < M.size; ++x) {
      cur.push_back(x);
      tuples.push_back(cur);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);

  Solver s{cfg};
  for (uint32_t n = 0;; ++n) {
    bool separated = true;
    for (size_t i = 0; i < tuples.size() && separated; ++i)
      for (size_t j = i + 1; j < tuples.size() && separated; ++j) {
        if (tuples[i].size() != tuples[j].size()) continue;
        if (s.solve(M, tuples[i], M, tuples[j], n) && s.solve(M, tuples[j], M, tuples[i], n))
          separated = false;  // equivalent but in different (singleton) orbits
      }
    if (separated) return n;
    if (n > M.size + 2) return n;  // unreachable on linear orders; guards the loop
  }
}

size_t bf_memo_size() {
  std::lock_guard<std::mutex> lock(table_mutex());
  return memo().size();
}
void bf_memo_clear() {
  std::lock_guard<std::mutex> lock(table_mutex());
  memo().clear();
}

}  // namespace bfo
