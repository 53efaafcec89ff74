#include "bfo/suite.hpp"

#include <chrono>
#include <map>
#include <random>

#include "bfo/bf.hpp"
#include "bfo/canonical.hpp"
#include "bfo/codec.hpp"
#include "bfo/probe.hpp"
#include "bfo/randform.hpp"
#include "bfo/split.hpp"
#include "bfo/term_bf.hpp"

namespace bfo {

namespace {

using Clock = std::chrono::steady_clock;

std::vector<std::vector<uint32_t>> increasing_tuples(uint32_t size, uint32_t maxlen) {
  std::vector<std::vector<uint32_t>> out{{}};
  std::vector<uint32_t> cur;
  auto rec = [&](auto&& self, uint32_t lo) -> void {
    if (cur.size() == maxlen) return;
    for (uint32_t x = lo; x < size; ++x) {
      cur.push_back(x);
      out.push_back(cur);
      self(self, x + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

LabeledFiniteOrder chain(uint32_t k) { return LabeledFiniteOrder::chain(k); }

// --- criterion 1: tuple game versus interval composition ---
SuiteResult crit_oracle_equivalence(uint64_t) {
  SuiteResult r{"oracle-equivalence"};
  for (uint32_t m = 0; m <= 5; ++m)
    for (uint32_t n = 0; n <= 5; ++n) {
      auto M = chain(m), N = chain(n);
      auto mts = increasing_tuples(m, 3);
      auto nts = increasing_tuples(n, 3);
      for (auto& a : mts)
        for (auto& b : nts) {
          if (a.size() != b.size()) continue;
          for (uint32_t rank = 0; rank <= 4; ++rank) {
            r.checked++;
            bool direct = bf_finite(M, a, N, b, rank).verdict == Verdict::LE;
            bool via = bf_finite_by_intervals(M, a, N, b, rank) == Verdict::LE;
            if (direct != via) r.failures++;
          }
        }
    }
  return r;
}

// --- criterion 2: type formulas match the game exactly ---
SuiteResult crit_canonical_formulas(uint64_t) {
  SuiteResult r{"canonical-formulas"};
  for (uint32_t asz = 0; asz <= 4; ++asz) {
    auto A = chain(asz);
    for (auto& a : increasing_tuples(asz, 2))
      for (uint32_t n = 1; n <= 3; ++n) {
        auto phi = canonical_le_formula(A, a, n);
        auto psi = canonical_ge_formula(A, a, n);
        for (uint32_t bsz = 0; bsz <= 5; ++bsz) {
          auto B = chain(bsz);
          for (auto& b : increasing_tuples(bsz, 2)) {
            if (b.size() != a.size()) continue;
            Env env;
            for (size_t i = 0; i < b.size(); ++i) env.vals["x" + std::to_string(i)] = b[i];
            r.checked += 2;
            bool le = bf_finite(B, b, A, a, n).verdict == Verdict::LE;
            bool ge = bf_finite(A, a, B, b, n).verdict == Verdict::LE;
            Env e1 = env, e2 = env;
            if (eval(B, e1, phi) != le) r.failures++;
            if (eval(B, e2, psi) != ge) r.failures++;
          }
        }
      }
  }
  return r;
}

// --- criterion 3: interval splitting, both properties ---
SuiteResult crit_interval_splitting(uint64_t seed) {
  SuiteResult r{"interval-splitting"};
  std::mt19937_64 rng(seed * 7919 + 3);
  uint32_t instances = 0;
  uint64_t sub = 0;
  while (instances < 200 && ++sub < 4000) {
    uint32_t asz = 2 + (uint32_t)(rng() % 4);  // sizes 2..5
    uint32_t len = (uint32_t)(rng() % 3);
    if (len > asz) continue;
    RandomFormulaSpec spec{FormulaClass::E, 1 + (uint32_t)(rng() % 3), len, 2, false, 0};
    FormulaPtr f;
    try {
      f = random_formula(rng(), spec);
    } catch (const FormulaError&) {
      continue;
    }
    auto A = chain(asz);
    auto tuples = increasing_tuples(asz, len);
    std::vector<uint32_t> a;
    bool found = false;
    for (auto& t : tuples) {
      if (t.size() != len) continue;
      a = t;
      found = true;
      if (rng() % 2) break;
    }
    if (!found) continue;
    std::vector<FormulaPtr> ts;
    try {
      ts = interval_split(A, a, f);
    } catch (const FormulaError&) {
      continue;  // the tuple does not satisfy this instance
    }
    instances++;
    r.checked++;
    // (a) each interval of A satisfies its sentence
    for (size_t i = 0; i < ts.size(); ++i) {
      int64_t lo = (i == 0) ? -1 : (int64_t)a[i - 1];
      int64_t hi = (i == a.size()) ? (int64_t)asz : (int64_t)a[i];
      if (!eval_sentence(substructure(A, lo, hi), ts[i])) r.failures++;
    }
    // (b) any small order whose intervals satisfy them satisfies f
    for (uint32_t bsz = 0; bsz <= 6; ++bsz) {
      auto B = chain(bsz);
      for (auto& b : increasing_tuples(bsz, len)) {
        if (b.size() != len) continue;
        bool all = true;
        for (size_t i = 0; i <= len && all; ++i) {
          int64_t lo = (i == 0) ? -1 : (int64_t)b[i - 1];
          int64_t hi = (i == len) ? (int64_t)bsz : (int64_t)b[i];
          all = eval_sentence(substructure(B, lo, hi), ts[i]);
        }
        if (!all) continue;
        Env env;
        for (size_t i = 0; i < b.size(); ++i) env.vals["x" + std::to_string(i)] = b[i];
        if (!eval(B, env, f)) r.failures++;
      }
    }
  }
  r.note = std::to_string(instances) + " instances";
  if (instances < 200) r.failures++;
  return r;
}

// all distinct grammar shapes denoting finite orders of size <= 6
std::vector<Term> finite_term_shapes() {
  std::vector<Term> shapes;
  for (const char* s :
       {"0", "1", "2", "3", "4", "5", "6", "1 + 1", "2 + 3", "1 + 2 + 3", "3 + 3", "2 * 3",
        "3 * 2", "2 * 2", "1 * 5", "6 * 1", "(1 + 1) * 3", "2 * (1 + 2)", "(1 + 1) * (1 + 1)",
        "1 + 2 * 2", "2 * 2 + 1", "(2 + 1) * 2", "0 + 4", "4 + 0", "0 * 7", "2 + 0 + 2",
        "1 + 1 + 1 + 1", "(1 + 1 + 1) * 2", "5 + 1", "1 + 5"})
    shapes.push_back(parse_term(s));
  return shapes;
}

// --- criterion 4: symbolic engine equals the finite game on finite terms ---
SuiteResult crit_finite_agreement(uint64_t) {
  SuiteResult r{"finite-agreement"};
  auto shapes = finite_term_shapes();
  for (auto& s : shapes)
    for (auto& t : shapes) {
      auto ss = finite_size(s), ts = finite_size(t);
      if (!ss || !ts || *ss > 6 || *ts > 6) {
        r.failures++;  // corpus invariant
        continue;
      }
      for (uint32_t rank = 0; rank <= 4; ++rank) {
        r.checked++;
        Verdict v = bf_term(s, t, rank);
        if (v == Verdict::Unknown) {
          r.failures++;
          continue;
        }
        auto vf =
            bf_finite(chain((uint32_t)*ss), {}, chain((uint32_t)*ts), {}, rank).verdict;
        if (v != vf) r.failures++;
      }
    }
  return r;
}

// --- criterion 5: the fixed expected verdicts on infinite orders ---
SuiteResult crit_fixtures(uint64_t) {
  SuiteResult r{"fixtures"};
  auto expect = [&](const char* lhs, const char* rhs, uint32_t rank, Verdict want) {
    r.checked++;
    Verdict v = bf_term(parse_term(lhs), parse_term(rhs), rank);
    if (v != want) r.failures++;
  };
  // (i) discrete-block products collapse at rank 2, both directions
  std::vector<std::string> mult = {"zeta * 1", "zeta * 2", "zeta * w", "zeta * eta"};
  for (auto& a : mult)
    for (auto& b : mult) expect(a.c_str(), b.c_str(), 2, Verdict::LE);
  // (ii) w + K is rank-2 below w + L whenever L has no last element
  std::vector<std::string> ks = {"w", "w + 1", "w + 2", "w + w", "w + zeta", "w + eta"};
  std::vector<std::string> ls = {"w + w", "w + zeta", "w + eta"};
  for (auto& a : ks)
    for (auto& b : ls) expect(a.c_str(), b.c_str(), 2, Verdict::LE);
  // also the degenerate L with K empty: w itself
  for (auto& a : ks) expect(a.c_str(), "w", 2, Verdict::LE);
  // (iii) the shuffled-block order absorbs a point-separated double copy at rank 4
  std::string p = "(eta + 2 + eta) * eta";
  expect((p + " + 1 + " + p).c_str(), p.c_str(), 4, Verdict::LE);
  // (iv) image membership: the product shape passes, the mutant fails via
  // the two accumulation conditions
  r.checked++;
  if (!image_check_eta(parse_term(p))) r.failures++;
  r.checked++;
  auto rep = image_check_eta_report(parse_term(p + " + 1 + " + p));
  if (rep.ok || rep.cond[2] || rep.cond[3]) r.failures++;
  return r;
}

std::vector<Term> fifty_term_corpus() {
  std::vector<Term> corpus;
  std::vector<std::string> texts = {
      "1",        "2",         "3",          "w",          "w*",        "zeta",
      "eta",      "w + 1",     "w + 2",      "1 + w*",     "w + w",     "w* + w*",
      "w + w*",   "zeta + 1",  "1 + zeta",   "zeta + zeta", "w + zeta", "zeta + w",
      "eta + 1",  "1 + eta",   "eta + 2 + eta", "w + eta", "eta + w",  "w* + eta",
      "zeta * 2", "zeta * w",  "zeta * eta", "w * w",      "w * zeta",  "w* * w",
      "w + 3 + w*", "2 + eta + 2", "w * eta",  "zeta * 3",  "w + w + w", "eta + zeta",
      "zeta + eta", "1 + eta + 1", "w* + 2 + w", "(w + w*) * 2", "(1 + eta) * w",
      "zeta * 2 + 1", "w + 1 + w*", "eta + 3 + eta", "2 * eta", "3 * eta",
      "(2 + eta) * w", "zeta^2", "zeta^2 * 2", "w* + w* + 1"};
  for (auto& s : texts) corpus.push_back(parse_term(s));
  return corpus;
}

// --- criterion 6: codec round trips ---
SuiteResult crit_codec_roundtrips(uint64_t seed) {
  SuiteResult r{"codec-roundtrips"};
  std::vector<std::pair<uint32_t, uint32_t>> params = {{1, 1}, {2, 0}, {3, 0}, {4, 0}, {1, 2}};
  for (uint32_t i = 0; i < 100; ++i) {
    auto [m, d] = params[i % params.size()];
    auto L = gen_T_model(m, d, seed + i);
    r.checked++;
    if (L.size > 12) {
      r.failures++;
      continue;
    }
    try {
      if (!(phi_decode(phi_encode(L)) == L)) r.failures++;
    } catch (const CodecError&) {
      r.failures++;
    }
  }
  auto corpus = fifty_term_corpus();
  for (auto& t : corpus) {
    r.checked += 4;
    try {
      auto je = jump_eta(t);
      auto jz = jump_zeta(t, 1);
      if (jump_eta_decode(je.term) != t) r.failures++;
      if (jump_zeta_decode(jz.term, 1) != t) r.failures++;
      // encoder outputs always land inside their image class
      if (!image_check_eta(je.term)) r.failures++;
      if (!image_check_zeta(jz.term, 1)) r.failures++;
    } catch (const CodecError&) {
      r.failures++;
    }
  }
  r.note = "100 generated orders + " + std::to_string(corpus.size()) + " terms";
  return r;
}

// --- criterion 7: image structure and rank-2 labels ---
SuiteResult crit_image_structure(uint64_t seed) {
  SuiteResult r{"image-structure"};
  std::vector<std::pair<uint32_t, uint32_t>> params = {{1, 1}, {2, 0}, {3, 0}, {4, 0}, {1, 2}};
  std::vector<DecoratedTerm> labeled;
  for (uint32_t i = 0; i < 100; ++i) {
    auto [m, d] = params[i % params.size()];
    auto L = gen_T_model(m, d, seed + i);
    Term t = phi_encode(L);
    r.checked += 2;
    if (!image_check_phi(t)) r.failures++;
    if (!no5_check(t)) r.failures++;
    if (labeled.size() < 6) labeled.push_back(eq2_label(t));
  }
  // sampled interval pairs: label equality must match the rank-2 engine, and
  // finite probes never see more structure than the labels report
  struct Anchored {
    Term term;
    PointAddress p, q;
    Eq2Class cls;
  };
  std::vector<Anchored> ivs;
  for (auto& dec : labeled)
    for (size_t i = 0; i + 1 < dec.anchors.size() && ivs.size() < 24; i += 1) {
      for (size_t j = i + 1; j < dec.anchors.size() && j <= i + 3; ++j) {
        Anchored an{dec.term, dec.anchors[i], dec.anchors[j], {}};
        an.cls = eq2_interval_class(dec.term, an.p, an.q);
        ivs.push_back(an);
      }
    }
  uint64_t pairs = 0;
  for (size_t i = 0; i < ivs.size(); ++i)
    for (size_t j = i + 1; j < ivs.size() && pairs < 130; ++j) {
      ++pairs;
      r.checked++;
      bool label_eq = ivs[i].cls.same_as(ivs[j].cls, 64);
      Term a = subinterval(ivs[i].term, Cut::at(ivs[i].p), Cut::at(ivs[i].q));
      Term b = subinterval(ivs[j].term, Cut::at(ivs[j].p), Cut::at(ivs[j].q));
      bool game_eq =
          bf_term(a, b, 2) == Verdict::LE && bf_term(b, a, 2) == Verdict::LE;
      if (label_eq != game_eq) r.failures++;
    }
  // probe consistency: successor structure visible in a 12-point probe never
  // exceeds the term counts, and matches exactly on finite intervals
  for (auto& an : ivs) {
    Term ival = subinterval(an.term, Cut::at(an.p), Cut::at(an.q));
    auto pr = expand_probe(ival, 12);
    uint64_t probe_pairs = 0;
    for (size_t k = 0; k + 1 < pr.addresses.size(); ++k) {
      auto s = succ_point(ival, pr.addresses[k]);
      if (s && *s == pr.addresses[k + 1]) probe_pairs++;
    }
    r.checked++;
    if (an.cls.finite) {
      uint64_t expect = an.cls.finite_size > 0 ? an.cls.finite_size - 1 : 0;
      if (an.cls.finite_size <= 12 && probe_pairs != expect) r.failures++;
    } else if (!an.cls.i2 && probe_pairs > an.cls.c2 + an.cls.head + an.cls.tail) {
      r.failures++;
    }
  }
  r.note = std::to_string(pairs) + " interval pairs";
  if (pairs < 100) r.failures++;
  return r;
}

// --- criterion 8: classifier closure laws over a seeded corpus ---
SuiteResult crit_closure_laws(uint64_t seed) {
  SuiteResult r{"closure-laws"};
  std::mt19937_64 rng(seed * 31 + 17);
  std::vector<FormulaPtr> corpus;
  uint32_t made = 0;
  while (corpus.size() < 1000 && made < 4000) {
    ++made;
    RandomFormulaSpec spec{static_cast<FormulaClass>(rng() % 6), 1 + (uint32_t)(rng() % 3),
                           (uint32_t)(rng() % 2), 2, false, 0};
    try {
      corpus.push_back(random_formula(rng(), spec));
    } catch (const FormulaError&) {
    }
  }
  for (size_t i = 0; i < corpus.size(); ++i) {
    const auto& f = corpus[i];
    const auto& g = corpus[(i * 37 + 11) % corpus.size()];
    auto tf = classify(f), tg = classify(g);
    auto chk = [&](bool ok) {
      r.checked++;
      if (!ok) r.failures++;
    };
    // containments on the formula itself
    chk(tf.e <= std::max(tf.sigma, 1u));
    chk(tf.ebar <= tf.e);
    chk(tf.a <= std::max(tf.pi, 1u));
    chk(tf.abar <= tf.a);
    // negation swaps the ladder sides
    auto nf = classify(negate_nnf(f));
    chk(nf.a <= tf.e);
    chk(nf.e <= tf.a);
    chk(nf.abar <= tf.ebar);
    chk(nf.ebar <= tf.abar);
    // junction and quantifier closure laws
    uint32_t re = std::max(tf.e, tg.e);
    chk(classify(f_or({f, g})).e <= re);
    chk(classify(f_and({f, g})).ebar <= std::max(tf.ebar, tg.ebar) + 0);
    chk(classify(f_exists({"q0"}, f)).e <= std::max(tf.e, 1u));
    chk(classify(f_forall({"q0"}, f)).a <= tf.e + 1);
    uint32_t reb = std::max(tf.ebar, tg.ebar);
    chk(classify(f_or({f, g})).ebar <= reb);
    chk(classify(f_and({f, g})).abar <= std::max(tf.abar, tg.abar));
    chk(classify(f_exists({"q0"}, f)).e <= tf.ebar + 2);
    chk(classify(f_forall({"q0"}, f)).a <= tf.ebar + 1);
  }
  r.note = std::to_string(corpus.size()) + " formulas";
  if (corpus.size() < 1000) r.failures++;
  return r;
}

// --- criterion 9: truth transfer along certified relations ---
SuiteResult crit_karp_transfer(uint64_t seed) {
  SuiteResult r{"karp-transfer"};
  std::mt19937_64 rng(seed * 101 + 7);
  const std::vector<FormulaClass> classes = {FormulaClass::Pi, FormulaClass::E, FormulaClass::A,
                                             FormulaClass::Ebar};
  for (auto cls : classes) {
    uint32_t done = 0;
    uint64_t guard = 0;
    while (done < 500 && ++guard < 100000) {
      uint32_t n = 1 + (uint32_t)(rng() % 3);
      uint32_t asz = 1 + (uint32_t)(rng() % 4), bsz = 1 + (uint32_t)(rng() % 4);
      uint32_t len = (uint32_t)(rng() % 3);
      if (len > std::min(asz, bsz)) continue;
      bool same = rng() % 2 == 0;
      if (same) bsz = asz;
      auto A = chain(asz), B = chain(bsz);
      auto ats = increasing_tuples(asz, len), bts = increasing_tuples(bsz, len);
      std::vector<uint32_t> a, b;
      std::vector<std::vector<uint32_t>> al, bl;
      for (auto& t : ats)
        if (t.size() == len) al.push_back(t);
      for (auto& t : bts)
        if (t.size() == len) bl.push_back(t);
      if (al.empty() || bl.empty()) continue;
      a = al[rng() % al.size()];
      b = same ? a : bl[rng() % bl.size()];
      if (bf_finite(A, a, B, b, n).verdict != Verdict::LE) continue;  // need (A,a) <=_n (B,b)
      FormulaPtr f;
      try {
        f = random_formula(rng(), RandomFormulaSpec{cls, n, len, 2, false, 0});
      } catch (const FormulaError&) {
        continue;
      }
      Env ea, eb;
      for (size_t i = 0; i < len; ++i) {
        ea.vals["x" + std::to_string(i)] = a[i];
        eb.vals["x" + std::to_string(i)] = b[i];
      }
      bool from_a = cls == FormulaClass::Pi || cls == FormulaClass::A;
      r.checked++;
      if (from_a) {
        if (eval(A, ea, f) && !eval(B, eb, f)) r.failures++;
      } else {
        if (eval(B, eb, f) && !eval(A, ea, f)) r.failures++;
      }
      done++;
    }
    if (done < 500) r.failures++;
  }
  r.note = "500 triples per class";
  return r;
}

// --- criterion 10: determinism of seeded outputs ---
SuiteResult crit_determinism(uint64_t seed) {
  SuiteResult r{"determinism"};
  for (uint64_t s = seed; s < seed + 5; ++s) {
    r.checked++;
    if (gen_T_model(2, 1, s).key() != gen_T_model(2, 1, s).key()) r.failures++;
    r.checked++;
    auto f1 = random_formula(s, RandomFormulaSpec{FormulaClass::E, 2, 1, 2, false, 0});
    auto f2 = random_formula(s, RandomFormulaSpec{FormulaClass::E, 2, 1, 2, false, 0});
    if (to_sexpr(f1) != to_sexpr(f2)) r.failures++;
    r.checked++;
    auto p1 = expand_probe(parse_term("zeta * eta"), 9);
    auto p2 = expand_probe(parse_term("zeta * eta"), 9);
    if (p1.addresses.size() != p2.addresses.size()) r.failures++;
  }
  auto s1 = run_suite("fixtures", seed);
  auto s2 = run_suite("fixtures", seed);
  r.checked++;
  if (s1.failures != s2.failures || s1.checked != s2.checked) r.failures++;
  return r;
}

using SuiteFn = SuiteResult (*)(uint64_t);
const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"oracle-equivalence", crit_oracle_equivalence},
      {"canonical-formulas", crit_canonical_formulas},
      {"interval-splitting", crit_interval_splitting},
      {"finite-agreement", crit_finite_agreement},
      {"fixtures", crit_fixtures},
      {"codec-roundtrips", crit_codec_roundtrips},
      {"image-structure", crit_image_structure},
      {"closure-laws", crit_closure_laws},
      {"karp-transfer", crit_karp_transfer},
      {"determinism", crit_determinism},
  };
  return table;
}

}  // namespace

std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (auto& [n, f] : suites()) out.push_back(n);
  return out;
}

SuiteResult run_suite(const std::string& name, uint64_t seed) {
  for (auto& [n, fn] : suites())
    if (n == name) {
      auto t0 = Clock::now();
      SuiteResult r = fn(seed);
      r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
      r.pass = r.failures == 0;
      return r;
    }
  throw std::runtime_error("unknown suite: " + name);
}

std::vector<SuiteResult> run_all_suites(uint64_t seed) {
  std::vector<SuiteResult> out;
  for (auto& [n, fn] : suites()) out.push_back(run_suite(n, seed));
  return out;
}

}  // namespace bfo
