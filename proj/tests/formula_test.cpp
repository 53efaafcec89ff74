#include "doctest.h"

#include "bfo/canonical.hpp"
#include "bfo/formula.hpp"
#include "bfo/randform.hpp"

using namespace bfo;

TEST_CASE("s-expression round trips") {
  std::vector<std::string> texts = {
      "(<= x y)",
      "(not (= x y))",
      "(and (<= x y) (rel 2 x))",
      "(or)",
      "(and)",
      "(E (x y) (and (not (<= y x)) (u x)))",
      "(A (z) (or (v z) (<= z z)))",
  };
  for (auto& t : texts) {
    CAPTURE(t);
    CHECK(to_sexpr(parse_formula(t)) == to_sexpr(parse_formula(to_sexpr(parse_formula(t)))));
  }
  auto fam = canonical_ge_formula(LabeledFiniteOrder::chain(2), {0}, 2);
  CHECK(to_sexpr(parse_formula(to_sexpr(fam))) == to_sexpr(fam));
  CHECK_THROWS_AS(parse_formula("(frob x)"), FormulaError);
  CHECK_THROWS_AS(parse_formula("(not (and))"), FormulaError);
}

TEST_CASE("evaluation basics") {
  auto chain2 = LabeledFiniteOrder::chain(2);
  auto chain1 = LabeledFiniteOrder::chain(1);
  auto lt = parse_formula("(E (x y) (not (<= y x)))");
  CHECK(eval_sentence(chain2, lt));
  CHECK_FALSE(eval_sentence(chain1, lt));
  // shadowing: the inner x rebinds and the outer binding comes back
  auto shadow = parse_formula("(E (x) (and (= x x) (E (x) (not (<= x x)))))");
  CHECK_FALSE(eval_sentence(chain2, shadow));

  LabeledFiniteOrder lab = LabeledFiniteOrder::chain(2);
  lab.tracked = 1;
  lab.labels = {1, 0};
  CHECK(eval_sentence(lab, parse_formula("(E (x) (rel 0 x))")));
  CHECK_FALSE(eval_sentence(lab, parse_formula("(A (x) (rel 0 x))")));
}

TEST_CASE("classifier on the basic shapes") {
  auto qf = parse_formula("(and (<= x y) (not (= x y)))");
  auto t = classify(qf);
  CHECK(t.sigma == 0);
  CHECK(t.pi == 0);
  CHECK(t.e == 1);
  CHECK(t.a == 1);

  auto sigma1 = parse_formula("(E (x) (<= x x))");
  CHECK(classify(sigma1).sigma == 1);
  CHECK(classify(sigma1).e == 1);

  auto pi2 = parse_formula("(A (x) (E (y) (not (<= y x))))");
  CHECK(classify(pi2).pi == 2);
  CHECK(classify(pi2).a == 2);

  // countable conjunction of existentials lands in Ebar_1
  RandomFormulaSpec e1spec{FormulaClass::E, 1, 1, 2, false, 0};
  std::vector<FormulaPtr> es;
  for (uint64_t s = 0; s < 4; ++s) es.push_back(random_formula(s, e1spec));
  auto conj = f_and(es);
  CHECK(classify(conj).ebar == 1);

  // an existential over an Ebar_2 body is at worst E_4
  RandomFormulaSpec eb2{FormulaClass::Ebar, 2, 1, 2, false, 0};
  auto body = random_formula(7, eb2);
  auto ex = f_exists({"x0"}, body);
  CHECK(classify(ex).e <= 4);
}

TEST_CASE("closure laws on a sampled corpus") {
  uint32_t checked = 0;
  for (uint64_t seed = 1; seed <= 40; ++seed) {
    for (uint32_t rank = 1; rank <= 3; ++rank) {
      RandomFormulaSpec se{FormulaClass::E, rank, 1, 2, false, 0};
      RandomFormulaSpec seb{FormulaClass::Ebar, rank, 1, 2, false, 0};
      auto e1 = random_formula(seed, se), e2 = random_formula(seed * 31 + 1, se);
      auto eb = random_formula(seed * 17 + 3, seb);
      CHECK(classify(f_or({e1, e2})).e <= rank);            // disjunction keeps E
      CHECK(classify(f_and({e1, e2})).ebar <= rank);        // conjunction lands in Ebar
      CHECK(classify(f_exists({"q"}, e1)).e <= rank);       // exists keeps E
      CHECK(classify(f_forall({"q"}, e1)).a <= rank + 1);   // forall promotes to A_{+1}
      CHECK(classify(f_or({eb, e1})).ebar <= rank);         // Ebar closed under disjunction
      CHECK(classify(f_and({eb, e1})).ebar <= rank);        // ... and conjunction
      CHECK(classify(f_exists({"q"}, eb)).e <= rank + 2);   // exists over Ebar
      CHECK(classify(f_forall({"q"}, eb)).a <= rank + 1);   // forall over Ebar
      // duality: the negation of an E formula is an A formula of the same rank
      CHECK(classify(negate_nnf(e1)).a <= rank);
      CHECK(classify(negate_nnf(eb)).abar <= rank);
      auto tag = classify(e1);
      CHECK(tag.sigma >= tag.e);   // Sigma_a is contained in E_a
      CHECK(tag.e >= tag.ebar);
      ++checked;
    }
  }
  CHECK(checked == 120);
}

TEST_CASE("relativization") {
  // definition unfolding
  auto f = parse_formula("(E (z) (and))");
  auto r = relativize(f, Var("x"), Var("y"));
  CHECK(to_sexpr(r) == "(E (z) (and (not (<= z x)) (not (<= y z)) (and)))");

  // classification is invariant on a random corpus
  for (uint64_t seed = 0; seed < 30; ++seed) {
    RandomFormulaSpec spec{static_cast<FormulaClass>(seed % 6), 1 + (uint32_t)(seed % 3), 1, 2,
                           false, 0};
    auto g = random_formula(seed + 100, spec);
    auto tag = classify(g);
    auto rel = relativize(g, Var("lo"), Var("hi"));
    auto rtag = classify(rel);
    CAPTURE(to_sexpr(g));
    CHECK(rtag.sigma == tag.sigma);
    CHECK(rtag.pi == tag.pi);
    CHECK(rtag.e == tag.e);
    CHECK(rtag.a == tag.a);
    CHECK(rtag.ebar == tag.ebar);
    CHECK(rtag.abar == tag.abar);
  }

  // semantics: M |= f restricted to (a,b) iff the substructure satisfies f
  auto M = LabeledFiniteOrder::chain(6);
  for (uint64_t seed = 0; seed < 25; ++seed) {
    RandomFormulaSpec spec{FormulaClass::Sigma, 1 + (uint32_t)(seed % 2), 0, 2, false, 0};
    auto g = random_formula(seed + 500, spec);
    for (uint32_t a = 0; a < 5; ++a)
      for (uint32_t b = a + 1; b < 6; ++b) {
        Env env;
        env.vals["lo"] = a;
        env.vals["hi"] = b;
        bool via_rel = eval(M, env, relativize(g, Var("lo"), Var("hi")));
        bool direct = eval_sentence(substructure(M, a, b), g);
        CAPTURE(to_sexpr(g));
        CAPTURE(a);
        CAPTURE(b);
        CHECK(via_rel == direct);
      }
  }

  // whole-line relativization is a no-op semantically
  auto g = parse_formula("(E (x y) (not (<= y x)))");
  CHECK(relativize(g, std::nullopt, std::nullopt) == g);
  CHECK_THROWS_AS(relativize(g, Var("x"), std::nullopt), FormulaError);
}

TEST_CASE("random formulas are deterministic and on target") {
  RandomFormulaSpec spec{FormulaClass::Pi, 2, 1, 2, false, 0};
  auto f1 = random_formula(42, spec);
  auto f2 = random_formula(42, spec);
  CHECK(to_sexpr(f1) == to_sexpr(f2));
  CHECK(classify(f1).pi <= 2);
  auto f3 = random_formula(43, spec);
  CHECK(to_sexpr(f1) != to_sexpr(f3));
}
