#include "doctest.h"

#include "bfo/bf.hpp"
#include "bfo/canonical.hpp"

using namespace bfo;

namespace {
LabeledFiniteOrder chain(uint32_t k) { return LabeledFiniteOrder::chain(k); }

bool holds(const FormulaPtr& f, const LabeledFiniteOrder& B, const std::vector<uint32_t>& b) {
  Env env;
  for (size_t i = 0; i < b.size(); ++i) env.vals["x" + std::to_string(i)] = b[i];
  return eval(B, env, f);
}

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
}  // namespace

TEST_CASE("type formulas match the game on a sample") {
  // the exhaustive sweep is an acceptance criterion; here: A up to 3, B up to 4
  for (uint32_t asz = 0; asz <= 3; ++asz) {
    auto A = chain(asz);
    for (auto& a : increasing_tuples(asz, 1)) {
      for (uint32_t n = 1; n <= 2; ++n) {
        auto phi = canonical_le_formula(A, a, n);
        auto psi = canonical_ge_formula(A, a, n);
        CHECK(classify(phi).ebar <= n);
        CHECK(classify(psi).a <= n);
        for (uint32_t bsz = 0; bsz <= 4; ++bsz) {
          auto B = chain(bsz);
          for (auto& b : increasing_tuples(bsz, 1)) {
            if (b.size() != a.size()) continue;
            CAPTURE(asz);
            CAPTURE(bsz);
            CAPTURE(n);
            bool le = bf_finite(B, b, A, a, n).verdict == Verdict::LE;
            bool ge = bf_finite(A, a, B, b, n).verdict == Verdict::LE;
            CHECK(holds(phi, B, b) == le);
            CHECK(holds(psi, B, b) == ge);
          }
        }
      }
    }
  }
}

TEST_CASE("singleton-world formula accepts every nonempty structure") {
  // in a one-point world every realized atomic type is constant, so the
  // below-type formula holds of any structure with at least one point
  auto phi = canonical_le_formula(chain(1), {}, 1);
  CHECK_FALSE(holds(phi, chain(0), {}));
  for (uint32_t k = 1; k <= 5; ++k) CHECK(holds(phi, chain(k), {}));
  // the above-type formula instead pins the size from above
  auto psi = canonical_ge_formula(chain(1), {}, 1);
  CHECK(holds(psi, chain(1), {}));
  CHECK(holds(psi, chain(0), {}));
  CHECK_FALSE(holds(psi, chain(2), {}));
}

TEST_CASE("reflexivity of the type formulas") {
  auto A = chain(3);
  for (uint32_t n = 1; n <= 3; ++n) {
    CHECK(holds(canonical_le_formula(A, {1}, n), A, {1}));
    CHECK(holds(canonical_ge_formula(A, {1}, n), A, {1}));
  }
}

TEST_CASE("type formulas on labeled structures") {
  LabeledFiniteOrder A = chain(2);
  A.tracked = 1;
  A.labels = {1, 0};
  LabeledFiniteOrder B = chain(2);
  B.tracked = 1;
  B.labels = {0, 1};
  auto phi = canonical_le_formula(A, {0}, 1);
  CHECK(holds(phi, A, {0}));
  CHECK_FALSE(holds(phi, B, {0}));  // profile of the slot differs
  CHECK(holds(phi, B, {1}) ==
        (bf_finite(B, {1}, A, {0}, 1).verdict == Verdict::LE));
}

TEST_CASE("relativized type formulas talk about the interval") {
  // inside the 5-chain, the interval (0, 4) is a 3-chain
  auto A = chain(3);
  auto psi = canonical_ge_formula(A, {}, 2);
  auto M = chain(5);
  Env env;
  env.vals["l"] = 0;
  env.vals["h"] = 4;
  CHECK(eval(M, env, relativize(psi, Var("l"), Var("h"))));
  env.vals["h"] = 3;  // interval is a 2-chain now; 2-chain >=_2 3-chain fails
  CHECK_FALSE(eval(M, env, relativize(psi, Var("l"), Var("h"))));
}
