#pragma once

#include "bfo/formula.hpp"

namespace bfo {

// Given a pure order A, an increasing tuple a realizing an existential-class
// formula f(x0..x{k-1}), produces sentences t_0..t_k, one per open interval of
// A around the tuple, such that (a) each interval of A satisfies its sentence
// and (b) any order whose intervals around an increasing tuple b satisfy them
// must satisfy f(b). Each sentence stays within the existential class of f.
std::vector<FormulaPtr> interval_split(const LabeledFiniteOrder& A,
                                       const std::vector<uint32_t>& a, const FormulaPtr& f);

}  // namespace bfo
