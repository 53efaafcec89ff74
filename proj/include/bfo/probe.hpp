#pragma once

#include "bfo/finite.hpp"
#include "bfo/term.hpp"

namespace bfo {

// Deterministic finite suborder of a term: up to `budget` points chosen
// breadth-fairly across summands and product coordinates, returned in
// increasing order together with the order-embedding into the term.
struct Probe {
  LabeledFiniteOrder order;            // pure chain of addresses.size() points
  std::vector<PointAddress> addresses; // sorted increasing, addresses[i] realizes point i
};

Probe expand_probe(const Term& t, uint32_t budget);

}  // namespace bfo
