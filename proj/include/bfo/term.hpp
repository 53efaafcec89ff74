#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bfo {

// Symbolic countable linear orders built from finite chains, w, w*, zeta, eta,
// finite sums, and the replacement product A*B = sum over B of copies of A.
enum class TermKind : uint8_t { Fin, Omega, OmegaStar, Zeta, Eta, Sum, Prod };

struct Term {
  TermKind kind = TermKind::Fin;
  uint64_t n = 0;            // Fin only
  std::vector<Term> parts;   // Sum: >= 2 parts; Prod: parts[0] = block, parts[1] = index

  const Term& block() const { return parts[0]; }
  const Term& index() const { return parts[1]; }
  bool operator==(const Term& o) const;
  bool operator!=(const Term& o) const { return !(*this == o); }
};

Term fin(uint64_t n);
Term omega();
Term omega_star();
Term zeta();
Term eta();
Term sum(std::vector<Term> parts);
Term prod(Term block, Term index);
Term zeta_pow(uint64_t k);  // right-nested Prod tower, k >= 1

struct TermParseError : std::runtime_error {
  size_t pos;
  TermParseError(const std::string& msg, size_t at)
      : std::runtime_error(msg + " at position " + std::to_string(at)), pos(at) {}
};

struct AddressError : std::runtime_error {
  explicit AddressError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses the ASCII grammar
//   term := sum ; sum := prod ('+' prod)* ; prod := atom ('*' atom)*
//   atom := NAT | 'w' | 'w*' | 'zeta' | 'zeta^' NAT | 'eta' | '(' sum ')'
// and returns the normalized term. A*B is the replacement sum over B.
Term parse_term(const std::string& text);
std::string to_text(const Term& t);  // canonical serialization in the same grammar

Term normalize(const Term& t);
bool is_normalized(const Term& t);
Term reverse_term(const Term& t);

// Number of points when the order type is finite.
std::optional<uint64_t> finite_size(const Term& t);

// Reduced rational, used for positions inside eta.
struct Rat {
  long long num = 0;
  long long den = 1;
  Rat() = default;
  Rat(long long n, long long d);
  bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
};
int cmp(const Rat& a, const Rat& b);

// A point of a term order. Coordinate kinds per constructor:
//   Fin/Omega: Nat; OmegaStar: NegFromEnd (1 = last point); Zeta: Int;
//   Eta: Rat; Sum: (part index, sub-address); Prod: (index address, block address).
struct PointAddress {
  enum class Kind : uint8_t { Nat, NegFromEnd, Int, Rational, SumAt, ProdAt };
  Kind kind = Kind::Nat;
  uint64_t nat = 0;
  long long z = 0;
  Rat q;
  uint32_t part = 0;
  std::vector<PointAddress> sub;  // SumAt: [sub]; ProdAt: [index addr, block addr]

  bool operator==(const PointAddress& o) const;

  static PointAddress at_nat(uint64_t i);
  static PointAddress from_end(uint64_t k);  // k >= 1
  static PointAddress at_int(long long z);
  static PointAddress at_rat(Rat q);
  static PointAddress in_sum(uint32_t part, PointAddress sub);
  static PointAddress in_prod(PointAddress idx, PointAddress blk);
};

// Interval endpoint: a point of the term or one of the end markers.
struct Cut {
  int sign = 0;  // -1: NegInf, 0: point, +1: PosInf
  PointAddress p;

  static Cut neg_inf() { return Cut{-1, {}}; }
  static Cut pos_inf() { return Cut{+1, {}}; }
  static Cut at(PointAddress a) { return Cut{0, std::move(a)}; }
  bool is_point() const { return sign == 0; }
};

enum class Ordering : int8_t { LT = -1, EQ = 0, GT = 1 };

void validate_address(const Term& t, const PointAddress& p);  // throws AddressError
Ordering compare_points(const Term& t, const PointAddress& p, const PointAddress& q);
Ordering compare_cuts(const Term& t, const Cut& a, const Cut& b);

// Order type of the open interval (a,b), as a normalized term.
Term subinterval(const Term& t, const Cut& a, const Cut& b);

std::optional<PointAddress> first_point(const Term& t);
std::optional<PointAddress> last_point(const Term& t);
std::optional<PointAddress> succ_point(const Term& t, const PointAddress& p);
std::optional<PointAddress> pred_point(const Term& t, const PointAddress& p);

// Finitely-far-apart equivalence and the bounded-block predicate over it.
bool sim1(const Term& t, const PointAddress& p, const PointAddress& q);
bool bs_leq(const Term& t, const PointAddress& p, uint64_t n);

std::string address_to_text(const PointAddress& p);
std::string cut_to_text(const Cut& c);
PointAddress parse_address(const Term& t, const std::string& text);

}  // namespace bfo
