#include "doctest.h"

#include "bfo/bf.hpp"

using namespace bfo;

namespace {
LabeledFiniteOrder chain(uint32_t k) { return LabeledFiniteOrder::chain(k); }
bool le(const LabeledFiniteOrder& M, std::vector<uint32_t> a, const LabeledFiniteOrder& N,
        std::vector<uint32_t> b, uint32_t n) {
  return bf_finite(M, a, N, b, n).verdict == Verdict::LE;
}
}  // namespace

TEST_CASE("game on chains, basic verdicts") {
  CHECK(le(chain(3), {}, chain(2), {}, 1));
  CHECK_FALSE(le(chain(2), {}, chain(3), {}, 1));
  CHECK(le(chain(4), {2}, chain(4), {2}, 5));  // reflexivity at any rank
  // rank-1 relation between chains is size comparison
  for (uint32_t i = 0; i <= 5; ++i)
    for (uint32_t j = 0; j <= 5; ++j) CHECK(le(chain(i), {}, chain(j), {}, 1) == (i >= j));
  // rank-2 relation between chains is equality
  for (uint32_t i = 0; i <= 5; ++i)
    for (uint32_t j = 0; j <= 5; ++j) CHECK(le(chain(i), {}, chain(j), {}, 2) == (i == j));
}

TEST_CASE("interval decomposition example") {
  CHECK(bf_finite_by_intervals(chain(4), {1}, chain(4), {2}, 1) == Verdict::NLE);
  CHECK(bf_finite_by_intervals(chain(5), {2}, chain(5), {2}, 3) == Verdict::LE);
  CHECK(bf_finite_by_intervals(chain(3), {}, chain(2), {}, 1) == Verdict::LE);
  CHECK_THROWS_AS(bf_finite_by_intervals(chain(3), {2, 1}, chain(3), {1, 2}, 1), TupleError);
  LabeledFiniteOrder labeled = chain(2);
  labeled.tracked = 1;
  labeled.labels = {1, 0};
  CHECK_THROWS_AS(bf_finite_by_intervals(labeled, {}, chain(2), {}, 1), TupleError);
}

TEST_CASE("oracle equivalence on a sample") {
  // full sweep lives in the acceptance suite; spot-check here
  for (uint32_t m = 0; m <= 4; ++m)
    for (uint32_t n = 0; n <= 4; ++n)
      for (uint32_t r = 0; r <= 3; ++r) {
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(r);
        CHECK((bf_finite(chain(m), {}, chain(n), {}, r).verdict == Verdict::LE) ==
              (bf_finite_by_intervals(chain(m), {}, chain(n), {}, r) == Verdict::LE));
      }
  CHECK((bf_finite(chain(5), {1, 3}, chain(5), {2, 4}, 2).verdict == Verdict::LE) ==
        (bf_finite_by_intervals(chain(5), {1, 3}, chain(5), {2, 4}, 2) == Verdict::LE));
}

TEST_CASE("spoiler modes agree") {
  GameConfig full;
  GameConfig bounded;
  for (uint32_t m = 0; m <= 5; ++m)
    for (uint32_t n = 0; n <= 5; ++n)
      for (uint32_t r = 1; r <= 4; ++r) {
        bounded.spoiler = SpoilerMode::bounded(n);
        auto v1 = bf_finite(chain(m), {}, chain(n), {}, r, full).verdict;
        auto v2 = bf_finite(chain(m), {}, chain(n), {}, r, bounded).verdict;
        CAPTURE(m);
        CAPTURE(n);
        CAPTURE(r);
        CHECK(v1 == v2);
      }
}

TEST_CASE("rank monotonicity and transitivity on small chains") {
  for (uint32_t m = 0; m <= 4; ++m)
    for (uint32_t n = 0; n <= 4; ++n)
      for (uint32_t r = 0; r <= 3; ++r) {
        if (le(chain(m), {}, chain(n), {}, r + 1)) CHECK(le(chain(m), {}, chain(n), {}, r));
        for (uint32_t k = 0; k <= 4; ++k)
          if (le(chain(m), {}, chain(n), {}, r) && le(chain(n), {}, chain(k), {}, r))
            CHECK(le(chain(m), {}, chain(k), {}, r));
      }
}

TEST_CASE("labels and uv flags separate structures") {
  LabeledFiniteOrder a = chain(2), b = chain(2);
  a.tracked = b.tracked = 1;
  a.labels = {1, 0};
  b.labels = {0, 1};
  CHECK_FALSE(le(a, {0}, b, {0}, 0));
  CHECK(le(a, {0}, b, {1}, 0));
  CHECK_FALSE(le(a, {}, b, {}, 1));  // R-profile of position 0 differs

  LabeledFiniteOrder s = chain(2);
  s.has_uv = true;
  s.uv = {1, 0};
  CHECK_FALSE(le(s, {}, chain(2), {}, 1));
}

TEST_CASE("classes of small pure orders") {
  std::vector<LabeledFiniteOrder> pool;
  for (uint32_t k = 0; k <= 3; ++k) pool.push_back(chain(k));
  auto p1 = bf_classes(pool, 1);
  CHECK(p1.representative.size() == 4);  // rank 1: classes by size
  auto p0 = bf_classes(pool, 0);
  CHECK(p0.representative.size() == 1);  // rank 0: empty tuples all agree
  auto single = bf_classes({chain(2)}, 3);
  CHECK(single.representative.size() == 1);
}

TEST_CASE("scott ranks of small structures") {
  CHECK(scott_rank_finite(chain(0)) == 0);
  CHECK(scott_rank_finite(chain(1)) == 0);
  CHECK(scott_rank_finite(chain(2)) == 1);
  CHECK(scott_rank_finite(chain(3)) == 1);  // frozen from the tuple-class oracle
  LabeledFiniteOrder distinct = chain(2);
  distinct.tracked = 1;
  distinct.labels = {1, 0};
  CHECK(scott_rank_finite(distinct) == 0);  // all profiles distinct: atomic types pin tuples
}

TEST_CASE("traces replay to the verdict") {
  GameConfig cfg;
  cfg.trace = true;
  auto r = bf_finite(chain(2), {}, chain(3), {}, 1, cfg);
  REQUIRE(r.verdict == Verdict::NLE);
  REQUIRE(!r.trace.empty());
  CHECK(r.trace[0].spoiler.size() == 3);  // spoiler needs all three points
  CHECK_FALSE(r.trace[0].reply_ok);

  auto ok = bf_finite(chain(3), {}, chain(2), {}, 1, cfg);
  REQUIRE(ok.verdict == Verdict::LE);
  REQUIRE(!ok.trace.empty());
  CHECK(ok.trace[0].reply_ok);
  // the reply realizes the spoiler's order pattern
  CHECK(ok.trace[0].reply.size() == ok.trace[0].spoiler.size());
}
