#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfo/bf.hpp"
#include "bfo/term.hpp"

namespace bfo {

struct TermBfConfig {
  uint32_t max_rank = 6;
  uint32_t param_window = 12;      // exhaustive window for cut-family parameters
  uint64_t step_budget = 80'000'000;
  uint32_t depth_budget = 12'000;
  uint32_t stabilization_budget = 6;  // iterations for product fixed points
};

struct StabilizationFailure : std::runtime_error {
  explicit StabilizationFailure(const std::string& m) : std::runtime_error(m) {}
};

// Decides t1 <=_rank t2. LE/NLE are exact on finite terms; Unknown only when
// the evaluation budget is exhausted.
Verdict bf_term(const Term& t1, const Term& t2, uint32_t rank, const TermBfConfig& cfg = {});

// Canonical rank-n characteristic of a term order. Two terms receive the same
// class id at rank n exactly when the engine certifies them equivalent.
struct NClass {
  uint32_t rank = 0;
  uint32_t id = 0;
  uint64_t hash = 0;
};

class ClassTable {
 public:
  explicit ClassTable(TermBfConfig cfg = {});

  NClass class_of(const Term& t, uint32_t rank);  // throws StabilizationFailure on budget
  NClass class_sum(const NClass& a, const NClass& b, uint32_t rank);
  const Term& representative(const NClass& c) const;
  size_t table_size(uint32_t rank) const;

 private:
  NClass intern(const Term& t, uint32_t rank);
  uint64_t signature_hash(const Term& rep, uint32_t rank);

  TermBfConfig cfg_;
  std::map<uint32_t, std::vector<Term>> reps_;
  std::map<std::pair<uint32_t, std::string>, uint32_t> by_text_;
  std::map<std::pair<uint32_t, uint32_t>, uint64_t> hashes_;
};

}  // namespace bfo
