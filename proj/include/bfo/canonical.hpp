#pragma once

#include "bfo/formula.hpp"

namespace bfo {

// Quantifier-free formula stating that x-bar realizes the same atomic type as
// the tuple `a` does in A (order pattern, equalities, and all predicates).
FormulaPtr atomic_type_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                               const std::vector<Var>& xs);

// Back-and-forth type formulas, built as schema families:
//   B |= canonical_le_formula(A,a,n)(b)  iff  (B,b) <=_n (A,a)
//   B |= canonical_ge_formula(A,a,n)(b)  iff  (B,b) >=_n (A,a)
// The le formula sits in Ebar_n, the ge formula in A_n. `size_bound` declares
// the largest structure the family promises to evaluate on.
FormulaPtr canonical_le_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                                uint32_t rank, uint32_t size_bound = 16);
FormulaPtr canonical_ge_formula(const LabeledFiniteOrder& A, const std::vector<uint32_t>& a,
                                uint32_t rank, uint32_t size_bound = 16);

// open-interval substructure; bounds are element indices, or -1 / M.size for
// the two ends
LabeledFiniteOrder substructure(const LabeledFiniteOrder& M, int64_t lo_excl, int64_t hi_excl);

}  // namespace bfo
