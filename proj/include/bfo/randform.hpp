#pragma once

#include "bfo/formula.hpp"

namespace bfo {

// Target classes for the generator, aligned with the classifier fields.
enum class FormulaClass : uint8_t { Sigma, Pi, E, A, Ebar, Abar };

struct RandomFormulaSpec {
  FormulaClass cls = FormulaClass::Sigma;
  uint32_t rank = 1;
  uint32_t free_count = 0;  // free variables x0..x{free_count-1}
  uint32_t width = 2;       // children per junction
  bool labels = false;      // include rel/u/v atoms
  uint32_t tracked = 0;     // rel indices drawn from [0, tracked)
};

// Deterministic per seed; the result's tag certifies membership in the target
// class at the requested rank.
FormulaPtr random_formula(uint64_t seed, const RandomFormulaSpec& spec);

bool tag_within(const ComplexityTag& tag, FormulaClass cls, uint32_t rank);

}  // namespace bfo
