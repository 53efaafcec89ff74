#include "bfo/randform.hpp"

#include <random>

namespace bfo {

bool tag_within(const ComplexityTag& tag, FormulaClass cls, uint32_t rank) {
  switch (cls) {
    case FormulaClass::Sigma: return tag.sigma <= rank;
    case FormulaClass::Pi: return tag.pi <= rank;
    case FormulaClass::E: return tag.e <= rank;
    case FormulaClass::A: return tag.a <= rank;
    case FormulaClass::Ebar: return tag.ebar <= rank;
    case FormulaClass::Abar: return tag.abar <= rank;
  }
  return false;
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  const RandomFormulaSpec& spec;
  uint32_t fresh = 0;

  uint32_t pick(uint32_t n) { return (uint32_t)(rng() % n); }

  Var fresh_var() { return "z" + std::to_string(fresh++); }

  FormulaPtr atom_over(const std::vector<Var>& scope) {
    if (scope.empty()) return pick(2) ? f_true() : f_false();
    const Var& x = scope[pick((uint32_t)scope.size())];
    const Var& y = scope[pick((uint32_t)scope.size())];
    uint32_t kinds = spec.labels ? 5 : 2;
    bool neg = pick(2);
    switch (pick(kinds)) {
      case 0: return f_leq(x, y, neg);
      case 1: return f_eq(x, y, neg);
      case 2: return f_rel(spec.tracked ? pick(spec.tracked) : 0, x, neg);
      case 3: return f_u(x, neg);
      default: return f_v(x, neg);
    }
  }

  FormulaPtr qf(const std::vector<Var>& scope) {
    uint32_t n = 1 + pick(spec.width + 1);
    std::vector<FormulaPtr> cs;
    for (uint32_t i = 0; i < n; ++i) cs.push_back(atom_over(scope));
    return pick(2) ? f_and(std::move(cs)) : f_or(std::move(cs));
  }

  std::vector<Var> quantifier_block(std::vector<Var>& scope) {
    uint32_t k = 1 + pick(2);
    std::vector<Var> vs;
    for (uint32_t i = 0; i < k; ++i) {
      vs.push_back(fresh_var());
      scope.push_back(vs.back());
    }
    return vs;
  }

  FormulaPtr gen(FormulaClass cls, uint32_t rank, std::vector<Var> scope) {
    switch (cls) {
      case FormulaClass::Sigma: {
        if (rank == 0) return qf(scope);
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) {
          auto sc = scope;
          auto vs = quantifier_block(sc);
          cs.push_back(f_exists(vs, gen(FormulaClass::Pi, rank - 1, sc)));
        }
        return f_or(std::move(cs));
      }
      case FormulaClass::Pi: {
        if (rank == 0) return qf(scope);
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) {
          auto sc = scope;
          auto vs = quantifier_block(sc);
          cs.push_back(f_forall(vs, gen(FormulaClass::Sigma, rank - 1, sc)));
        }
        return f_and(std::move(cs));
      }
      case FormulaClass::E: {
        if (rank <= 1) return gen(FormulaClass::Sigma, std::min(rank, 1u), scope);
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) {
          auto sc = scope;
          auto vs = quantifier_block(sc);
          cs.push_back(f_exists(vs, gen(FormulaClass::Abar, rank - 1, sc)));
        }
        return f_or(std::move(cs));
      }
      case FormulaClass::A: {
        if (rank <= 1) return gen(FormulaClass::Pi, std::min(rank, 1u), scope);
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) {
          auto sc = scope;
          auto vs = quantifier_block(sc);
          cs.push_back(f_forall(vs, gen(FormulaClass::Ebar, rank - 1, sc)));
        }
        return f_and(std::move(cs));
      }
      case FormulaClass::Ebar: {
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) cs.push_back(gen(FormulaClass::E, rank, scope));
        return pick(2) ? f_and(std::move(cs)) : f_or(std::move(cs));
      }
      case FormulaClass::Abar: {
        uint32_t n = 1 + pick(spec.width);
        std::vector<FormulaPtr> cs;
        for (uint32_t i = 0; i < n; ++i) cs.push_back(gen(FormulaClass::A, rank, scope));
        return pick(2) ? f_and(std::move(cs)) : f_or(std::move(cs));
      }
    }
    throw FormulaError("unreachable");
  }
};

}  // namespace

FormulaPtr random_formula(uint64_t seed, const RandomFormulaSpec& spec) {
  Gen g{std::mt19937_64(seed), spec, 0};
  std::vector<Var> scope;
  for (uint32_t i = 0; i < spec.free_count; ++i) scope.push_back("x" + std::to_string(i));
  FormulaPtr f = g.gen(spec.cls, spec.rank, scope);
  if (!tag_within(classify(f), spec.cls, spec.rank))
    throw FormulaError("generator produced an off-target formula");
  return f;
}

}  // namespace bfo
