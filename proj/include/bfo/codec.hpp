#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bfo/finite.hpp"
#include "bfo/term.hpp"

namespace bfo {

struct CodecError : std::runtime_error {
  explicit CodecError(const std::string& m) : std::runtime_error(m) {}
};
struct NotInImage : CodecError {
  std::string condition;
  NotInImage(const std::string& cond, const std::string& m)
      : CodecError("not in image: " + m + " [" + cond + "]"), condition(cond) {}
};
struct UnsupportedJump : CodecError {
  explicit UnsupportedJump(const std::string& m) : CodecError(m) {}
};

// c(x) = 2 when the predicate holds, 3 otherwise
enum class LabelCode : uint8_t { Holds = 2, Fails = 3 };

// ---------------------------------------------------------------------------
// theory generators and truncated axiom checking
// ---------------------------------------------------------------------------

LabeledFiniteOrder gen_T_model(uint32_t m, uint32_t d, uint64_t seed);
LabeledFiniteOrder gen_S_model(uint32_t m, uint32_t d, uint64_t seed);

enum class Theory : uint8_t { T, S };

struct AxiomReport {
  struct Line {
    std::string axiom;
    uint64_t checked = 0;
    uint64_t violated = 0;
  };
  std::vector<Line> lines;
  uint64_t checked() const;
  uint64_t violated() const;
};
AxiomReport check_axioms(const LabeledFiniteOrder& L, Theory theory, uint32_t m, uint32_t d);

// ---------------------------------------------------------------------------
// the label-code transform into pure orders
// ---------------------------------------------------------------------------

Term phi_encode(const LabeledFiniteOrder& L);
LabeledFiniteOrder phi_decode(const Term& t);  // throws NotInImage

struct PhiImageReport {
  bool in_image = false;
  std::string condition;  // "1" or "2" when not in image
  std::string detail;
};
PhiImageReport image_check_phi_report(const Term& t);
bool image_check_phi(const Term& t);

// run discipline: ends are 4-runs, block boundaries exactly 8, and all
// interior runs have length <= 3 (no 5 consecutive inside any element block)
bool no5_check(const Term& t);

// ---------------------------------------------------------------------------
// rank-2 interval classification on code images
// ---------------------------------------------------------------------------

struct Eq2Class {
  bool finite = false;
  uint64_t finite_size = 0;  // when the interval is a finite chain
  uint32_t head = 0, tail = 0;
  uint64_t c4 = 0, c3 = 0, c2 = 0;
  bool i4 = false, i3 = false, i2 = false;  // infinitely many

  bool same_as(const Eq2Class& o, uint64_t cap) const;
  std::string text(uint64_t cap) const;
};

struct DecoratedTerm {
  Term term;
  std::string kind;  // "eq2" | "eta-jump" | "zeta-jump"
  uint32_t power = 0;
  std::vector<PointAddress> anchors;  // marked points (element boundaries for eq2)

  std::string annotation_json() const;
};

DecoratedTerm eq2_label(const Term& t);  // pre: image_check_phi
Eq2Class eq2_interval_class(const Term& t, const PointAddress& p, const PointAddress& q);

// ---------------------------------------------------------------------------
// jumps
// ---------------------------------------------------------------------------

DecoratedTerm jump_eta(const Term& L);
Term jump_eta_decode(const Term& t);  // throws NotInImage

struct EtaImageReport {
  bool ok = false;
  std::array<bool, 5> cond{};  // conditions 1..5, cond[i] true when satisfied
};
EtaImageReport image_check_eta_report(const Term& t);
bool image_check_eta(const Term& t);

DecoratedTerm jump_zeta(const Term& L, uint32_t k);
Term jump_zeta_decode(const Term& t, uint32_t k);
bool image_check_zeta(const Term& t, uint32_t k);  // k == 1 only; else UnsupportedJump

// corpus record I/O: one labeled order per JSON object
std::string labeled_order_to_json(const LabeledFiniteOrder& L);
LabeledFiniteOrder labeled_order_from_json(const std::string& text);

}  // namespace bfo
