#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace bfo {

// Finite linear order with unary predicates R_0..R_{tracked-1} stored as a
// bitmask per element, and an optional U/V partition flag. Untracked
// predicates read as false everywhere.
struct LabeledFiniteOrder {
  uint32_t size = 0;
  uint32_t tracked = 0;
  std::vector<uint32_t> labels;  // size entries (empty allowed when tracked == 0)
  bool has_uv = false;
  std::vector<uint8_t> uv;  // 1 = U, 0 = V; exactly-one-of invariant is by encoding

  static LabeledFiniteOrder chain(uint32_t k) {
    LabeledFiniteOrder m;
    m.size = k;
    return m;
  }

  bool pred_holds(uint32_t elem, uint32_t i) const {
    if (tracked == 0 || i >= 32) return false;
    return labels[elem] >> i & 1u;
  }
  bool is_u(uint32_t elem) const { return has_uv && uv[elem]; }
  bool is_v(uint32_t elem) const { return has_uv && !uv[elem]; }
  bool pure() const { return tracked == 0 && !has_uv; }

  std::string key() const;  // canonical encoding, usable as a map key
  bool operator==(const LabeledFiniteOrder& o) const { return key() == o.key(); }
};

}  // namespace bfo
