#include "doctest.h"

#include "bfo/bf.hpp"
#include "bfo/canonical.hpp"
#include "bfo/randform.hpp"
#include "bfo/split.hpp"

using namespace bfo;

namespace {
LabeledFiniteOrder chain(uint32_t k) { return LabeledFiniteOrder::chain(k); }

bool sat(const LabeledFiniteOrder& M, const FormulaPtr& f, const std::vector<uint32_t>& tuple) {
  Env env;
  for (size_t i = 0; i < tuple.size(); ++i) env.vals["x" + std::to_string(i)] = tuple[i];
  return eval(M, env, f);
}

// property (a): every interval of A around the tuple satisfies its sentence
bool property_a(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                const std::vector<FormulaPtr>& ts) {
  for (size_t i = 0; i < ts.size(); ++i) {
    int64_t lo = (i == 0) ? -1 : (int64_t)a[i - 1];
    int64_t hi = (i == a.size()) ? (int64_t)A.size : (int64_t)a[i];
    if (!eval_sentence(substructure(A, lo, hi), ts[i])) return false;
  }
  return true;
}

// property (b): intervals satisfying the sentences force the formula
bool property_b(const FormulaPtr& f, const std::vector<FormulaPtr>& ts, uint32_t bmax) {
  size_t k = ts.size() - 1;
  for (uint32_t bsz = 0; bsz <= bmax; ++bsz) {
    auto B = chain(bsz);
    // all increasing tuples of length k
    std::vector<std::vector<uint32_t>> tuples;
    std::vector<uint32_t> cur;
    auto rec = [&](auto&& self, uint32_t lo) -> void {
      if (cur.size() == k) {
        tuples.push_back(cur);
        return;
      }
      for (uint32_t x = lo; x < bsz; ++x) {
        cur.push_back(x);
        self(self, x + 1);
        cur.pop_back();
      }
    };
    rec(rec, 0);
    for (auto& b : tuples) {
      bool all = true;
      for (size_t i = 0; i <= k && all; ++i) {
        int64_t lo = (i == 0) ? -1 : (int64_t)b[i - 1];
        int64_t hi = (i == k) ? (int64_t)bsz : (int64_t)b[i];
        all = eval_sentence(substructure(B, lo, hi), ts[i]);
      }
      if (all && !sat(B, f, b)) return false;
    }
  }
  return true;
}
}  // namespace

TEST_CASE("single witness right of the slot") {
  // f = E y (x0 < y) over the 3-chain with x0 = 1
  auto f = parse_formula("(E (y) (not (<= y x0)))");
  auto A = chain(3);
  auto ts = interval_split(A, {1}, f);
  REQUIRE(ts.size() == 2);
  // the right sentence asks for at least one point
  CHECK(to_sexpr(ts[1]).substr(0, 2) == "(E");
  CHECK(property_a(A, {1}, ts));
  CHECK(property_b(f, ts, 5));
}

TEST_CASE("degenerate split with an empty tuple") {
  auto f = parse_formula("(E (y z) (not (<= z y)))");
  auto A = chain(4);
  auto ts = interval_split(A, {}, f);
  REQUIRE(ts.size() == 1);
  CHECK(property_a(A, {}, ts));
  CHECK(property_b(f, ts, 5));
}

TEST_CASE("rejections") {
  auto A = chain(3);
  CHECK_THROWS_AS(interval_split(A, {1}, parse_formula("(E (y) (and (<= y x0) (not (<= y x0))))")),
                  FormulaError);  // unsatisfiable
  LabeledFiniteOrder lab = chain(2);
  lab.tracked = 1;
  lab.labels = {0, 1};
  CHECK_THROWS_AS(interval_split(lab, {}, parse_formula("(E (y) (rel 0 y))")), FormulaError);
}

TEST_CASE("seeded existential instances satisfy both properties") {
  uint32_t done = 0;
  for (uint64_t seed = 0; done < 25 && seed < 400; ++seed) {
    RandomFormulaSpec spec{FormulaClass::E, 1 + (uint32_t)(seed % 2), (uint32_t)(seed % 2), 2,
                           false, 0};
    auto f = random_formula(seed + 900, spec);
    auto A = chain(3 + seed % 3);
    std::vector<uint32_t> a;
    if (spec.free_count == 1) a.push_back((uint32_t)(seed % A.size));
    std::vector<FormulaPtr> ts;
    try {
      ts = interval_split(A, a, f);
    } catch (const FormulaError&) {
      continue;  // tuple does not satisfy the instance; try the next seed
    }
    CAPTURE(to_sexpr(f));
    CHECK(property_a(A, a, ts));
    CHECK(property_b(f, ts, 5));
    ++done;
  }
  CHECK(done == 25);
}
