#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bfo/finite.hpp"

namespace bfo {

enum class Verdict : uint8_t { LE, NLE, Unknown };

struct SpoilerMode {
  enum Kind : uint8_t { FullDomain, BoundedTuples };
  Kind kind = FullDomain;
  uint32_t len = 0;  // BoundedTuples only

  static SpoilerMode full_domain() { return {}; }
  static SpoilerMode bounded(uint32_t len) { return SpoilerMode{BoundedTuples, len}; }
};

struct GameConfig {
  uint32_t max_rank = 6;
  SpoilerMode spoiler;
  uint64_t memo_budget = 1ull << 22;
  bool trace = false;  // record a move trace in BfResult
};

// Alternating move record: `spoiler` is the tuple played on the right-hand
// structure of the stage, `reply` the answer on the left (empty + !reply_ok
// when no consistent answer exists, which ends an NLE trace).
struct GameStep {
  std::vector<uint32_t> spoiler;
  std::vector<uint32_t> reply;
  bool reply_ok = false;
};

struct BfResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<GameStep> trace;  // NLE: distinguishing sequence; LE: one winning line
};

struct TupleError : std::runtime_error {
  explicit TupleError(const std::string& m) : std::runtime_error(m) {}
};

bool atomic_type_equal(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                       const LabeledFiniteOrder& N, const std::vector<uint32_t>& b);

// Decides (M, a) <=_rank (N, b) exactly by game search. Tuples may repeat and
// need not be sorted; they must have equal length and index valid elements.
BfResult bf_finite(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                   const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                   uint32_t rank, const GameConfig& cfg = {});

// Interval-composition route for pure orders and strictly increasing tuples:
// conjoins the plain whole-order verdicts of corresponding open intervals.
Verdict bf_finite_by_intervals(const LabeledFiniteOrder& M, const std::vector<uint32_t>& a,
                               const LabeledFiniteOrder& N, const std::vector<uint32_t>& b,
                               uint32_t rank, const GameConfig& cfg = {});

struct Partition {
  std::vector<uint32_t> class_of;        // structure index -> class id
  std::vector<size_t> representative;    // class id -> structure index
};
Partition bf_classes(const std::vector<LabeledFiniteOrder>& structures, uint32_t rank,
                     const GameConfig& cfg = {});

// Least n such that rank-n equivalent equal-length tuples always lie in the
// same automorphism orbit (on finite linear orders the only automorphism is
// the identity, so orbits are singletons).
uint32_t scott_rank_finite(const LabeledFiniteOrder& M, const GameConfig& cfg = {});

// Shared memo statistics, mostly for budget tuning in tests.
size_t bf_memo_size();
void bf_memo_clear();

}  // namespace bfo
