#include "bfo/term.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace bfo {

namespace {
constexpr uint64_t kFinCap = 1ull << 32;  // parse/arithmetic guard

uint64_t checked_add(uint64_t a, uint64_t b) {
  if (a + b < a || a + b >= kFinCap) throw TermParseError("finite size overflow", 0);
  return a + b;
}
uint64_t checked_mul(uint64_t a, uint64_t b) {
  if (a != 0 && b > kFinCap / a) throw TermParseError("finite size overflow", 0);
  return a * b;
}
}  // namespace

bool Term::operator==(const Term& o) const {
  if (kind != o.kind) return false;
  if (kind == TermKind::Fin) return n == o.n;
  return parts == o.parts;
}

Term fin(uint64_t n) { return Term{TermKind::Fin, n, {}}; }
Term omega() { return Term{TermKind::Omega, 0, {}}; }
Term omega_star() { return Term{TermKind::OmegaStar, 0, {}}; }
Term zeta() { return Term{TermKind::Zeta, 0, {}}; }
Term eta() { return Term{TermKind::Eta, 0, {}}; }

Term sum(std::vector<Term> parts) { return Term{TermKind::Sum, 0, std::move(parts)}; }
Term prod(Term block, Term index) {
  return Term{TermKind::Prod, 0, {std::move(block), std::move(index)}};
}

Term zeta_pow(uint64_t k) {
  Term t = zeta();
  for (uint64_t i = 1; i < k; ++i) t = prod(zeta(), std::move(t));
  return t;
}

// ---------------------------------------------------------------------------
// Normalization. Beyond flattening and Fin merging this folds order-type
// identities so equal-looking inputs share one representation: eta absorbs
// neighbours that keep it dense without endpoints, finite prefixes of w (and
// suffixes of w*) are absorbed, w* + w = zeta, finite blocks collapse over
// infinite indices, and products re-associate to atomic blocks.
// ---------------------------------------------------------------------------

namespace {

Term normalize_sum_parts(std::vector<Term> parts);

Term normalize_prod(Term b, Term i) {
  if ((b.kind == TermKind::Fin && b.n == 0) || (i.kind == TermKind::Fin && i.n == 0))
    return fin(0);
  if (i.kind == TermKind::Fin && i.n == 1) return b;
  if (b.kind == TermKind::Fin && b.n == 1) return i;
  if (b.kind == TermKind::Prod)  // (A*C)*I = A*(C*I)
    return normalize_prod(b.parts[0], normalize_prod(b.parts[1], std::move(i)));
  if (i.kind == TermKind::Sum) {  // right-distribute over the index sum
    std::vector<Term> out;
    out.reserve(i.parts.size());
    for (auto& p : i.parts) out.push_back(normalize_prod(b, p));
    return normalize_sum_parts(std::move(out));
  }
  if (b.kind == TermKind::Eta) return eta();  // eta * I = eta for nonempty I
  if (b.kind == TermKind::Fin) {
    switch (i.kind) {
      case TermKind::Fin: return fin(checked_mul(b.n, i.n));
      case TermKind::Omega:
      case TermKind::OmegaStar:
      case TermKind::Zeta: return i;  // k*w = w, k*w* = w*, k*zeta = zeta
      case TermKind::Prod:            // k*(X*Y) = (k*X)*Y
        return normalize_prod(normalize_prod(std::move(b), i.parts[0]), i.parts[1]);
      default: break;  // k * eta stays
    }
  }
  return prod(std::move(b), std::move(i));
}

Term normalize_sum_parts(std::vector<Term> parts) {
  // flatten and drop empties
  std::vector<Term> flat;
  for (auto& p : parts) {
    if (p.kind == TermKind::Sum)
      for (auto& q : p.parts) flat.push_back(std::move(q));
    else if (!(p.kind == TermKind::Fin && p.n == 0))
      flat.push_back(std::move(p));
  }
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<Term> out;
    for (size_t i = 0; i < flat.size(); ++i) {
      if (!out.empty()) {
        Term& a = out.back();
        Term& b = flat[i];
        if (a.kind == TermKind::Fin && b.kind == TermKind::Fin) {
          a = fin(checked_add(a.n, b.n));
          changed = true;
          continue;
        }
        if (a.kind == TermKind::Eta && b.kind == TermKind::Eta) {
          changed = true;
          continue;
        }
        if (a.kind == TermKind::Fin && b.kind == TermKind::Omega) {
          a = omega();
          changed = true;
          continue;
        }
        if (a.kind == TermKind::OmegaStar && b.kind == TermKind::Fin) {
          changed = true;  // w* absorbs a finite suffix
          continue;
        }
        if (a.kind == TermKind::OmegaStar && b.kind == TermKind::Omega) {
          a = zeta();
          changed = true;
          continue;
        }
        if (out.size() >= 2 && a.kind == TermKind::Fin && a.n == 1 &&
            out[out.size() - 2].kind == TermKind::Eta && b.kind == TermKind::Eta) {
          out.pop_back();  // eta + 1 + eta = eta
          changed = true;
          continue;
        }
      }
      out.push_back(std::move(flat[i]));
    }
    flat = std::move(out);
  }
  if (flat.empty()) return fin(0);
  if (flat.size() == 1) return std::move(flat[0]);
  return sum(std::move(flat));
}

}  // namespace

Term normalize(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin:
    case TermKind::Omega:
    case TermKind::OmegaStar:
    case TermKind::Zeta:
    case TermKind::Eta: return t;
    case TermKind::Sum: {
      std::vector<Term> parts;
      parts.reserve(t.parts.size());
      for (auto& p : t.parts) parts.push_back(normalize(p));
      return normalize_sum_parts(std::move(parts));
    }
    case TermKind::Prod: return normalize_prod(normalize(t.block()), normalize(t.index()));
  }
  return t;
}

bool is_normalized(const Term& t) { return normalize(t) == t; }

Term reverse_term(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return t;
    case TermKind::Omega: return omega_star();
    case TermKind::OmegaStar: return omega();
    case TermKind::Zeta:
    case TermKind::Eta: return t;
    case TermKind::Sum: {
      std::vector<Term> parts;
      parts.reserve(t.parts.size());
      for (auto it = t.parts.rbegin(); it != t.parts.rend(); ++it)
        parts.push_back(reverse_term(*it));
      return normalize_sum_parts(std::move(parts));
    }
    case TermKind::Prod:
      return normalize_prod(reverse_term(t.block()), reverse_term(t.index()));
  }
  return t;
}

std::optional<uint64_t> finite_size(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin: return t.n;
    case TermKind::Sum: {
      uint64_t total = 0;
      for (auto& p : t.parts) {
        auto s = finite_size(p);
        if (!s) return std::nullopt;
        total = checked_add(total, *s);
      }
      return total;
    }
    case TermKind::Prod: {
      auto a = finite_size(t.block());
      auto b = finite_size(t.index());
      if (a && *a == 0) return 0;
      if (b && *b == 0) return 0;
      if (!a || !b) return std::nullopt;
      return checked_mul(*a, *b);
    }
    default: return std::nullopt;
  }
}

// ---------------------------------------------------------------------------
// Parsing / printing
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  const std::string& s;
  size_t i = 0;

  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  bool starts_with(const char* w) {
    skip();
    size_t j = 0;
    while (w[j] && i + j < s.size() && s[i + j] == w[j]) ++j;
    return w[j] == '\0';
  }

  uint64_t nat() {
    skip();
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw TermParseError("expected a number", i);
    uint64_t v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      v = v * 10 + (s[i] - '0');
      if (v >= kFinCap) throw TermParseError("finite size overflow", i);
      ++i;
    }
    return v;
  }

  Term atom() {
    skip();
    if (i >= s.size()) throw TermParseError("unexpected end of input", i);
    if (s[i] == '(') {
      ++i;
      Term t = sum_expr();
      if (!eat(')')) throw TermParseError("expected ')'", i);
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(s[i]))) return fin(nat());
    if (starts_with("zeta")) {
      i += 4;
      if (eat('^')) {
        uint64_t k = nat();
        if (k == 0) return fin(1);  // zeta^0 is the single-point multiplier
        return zeta_pow(k);
      }
      return zeta();
    }
    if (starts_with("eta")) {
      i += 3;
      return eta();
    }
    if (s[i] == 'w') {
      ++i;
      if (i < s.size() && s[i] == '*') {
        ++i;
        return omega_star();
      }
      return omega();
    }
    throw TermParseError("unexpected character", i);
  }

  Term prod_expr() {
    Term t = atom();
    while (eat('*')) t = prod(std::move(t), atom());
    return t;
  }

  Term sum_expr() {
    std::vector<Term> parts;
    parts.push_back(prod_expr());
    while (eat('+')) parts.push_back(prod_expr());
    if (parts.size() == 1) return std::move(parts[0]);
    return sum(std::move(parts));
  }
};

// zeta^k towers print back as the power atom
std::optional<uint64_t> zeta_tower_height(const Term& t) {
  if (t.kind == TermKind::Zeta) return 1;
  if (t.kind == TermKind::Prod && t.block().kind == TermKind::Zeta) {
    auto h = zeta_tower_height(t.index());
    if (h) return *h + 1;
  }
  return std::nullopt;
}

void print(const Term& t, std::string& out, bool atom_context) {
  if (auto h = zeta_tower_height(t)) {
    if (*h == 1)
      out += "zeta";
    else
      out += "zeta^" + std::to_string(*h);
    return;
  }
  switch (t.kind) {
    case TermKind::Fin: out += std::to_string(t.n); return;
    case TermKind::Omega: out += "w"; return;
    case TermKind::OmegaStar: out += "w*"; return;
    case TermKind::Zeta: out += "zeta"; return;
    case TermKind::Eta: out += "eta"; return;
    case TermKind::Sum: {
      if (atom_context) out += "(";
      for (size_t i = 0; i < t.parts.size(); ++i) {
        if (i) out += " + ";
        print(t.parts[i], out, false);
      }
      if (atom_context) out += ")";
      return;
    }
    case TermKind::Prod: {
      print(t.block(), out, true);
      out += " * ";
      print(t.index(), out, true);
      return;
    }
  }
}

}  // namespace

Term parse_term(const std::string& text) {
  Parser p{text};
  Term t = p.sum_expr();
  p.skip();
  if (p.i != text.size()) throw TermParseError("trailing input", p.i);
  return normalize(t);
}

std::string to_text(const Term& t) {
  std::string out;
  print(t, out, false);
  return out;
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

Rat::Rat(long long n, long long d) {
  if (d == 0) throw AddressError("zero denominator");
  if (d < 0) {
    n = -n;
    d = -d;
  }
  long long g = std::gcd(n < 0 ? -n : n, d);
  if (g == 0) g = 1;
  num = n / g;
  den = d / g;
}

int cmp(const Rat& a, const Rat& b) {
  // coordinates stay tiny; long double keeps this simple and safe enough
  long long lhs = a.num * b.den, rhs = b.num * a.den;
  return lhs < rhs ? -1 : lhs > rhs ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Point addresses
// ---------------------------------------------------------------------------

bool PointAddress::operator==(const PointAddress& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case Kind::Nat: return nat == o.nat;
    case Kind::NegFromEnd: return nat == o.nat;
    case Kind::Int: return z == o.z;
    case Kind::Rational: return q == o.q;
    case Kind::SumAt: return part == o.part && sub == o.sub;
    case Kind::ProdAt: return sub == o.sub;
  }
  return false;
}

PointAddress PointAddress::at_nat(uint64_t i) {
  PointAddress a;
  a.kind = Kind::Nat;
  a.nat = i;
  return a;
}
PointAddress PointAddress::from_end(uint64_t k) {
  PointAddress a;
  a.kind = Kind::NegFromEnd;
  a.nat = k;
  return a;
}
PointAddress PointAddress::at_int(long long z) {
  PointAddress a;
  a.kind = Kind::Int;
  a.z = z;
  return a;
}
PointAddress PointAddress::at_rat(Rat q) {
  PointAddress a;
  a.kind = Kind::Rational;
  a.q = q;
  return a;
}
PointAddress PointAddress::in_sum(uint32_t part, PointAddress sub) {
  PointAddress a;
  a.kind = Kind::SumAt;
  a.part = part;
  a.sub.push_back(std::move(sub));
  return a;
}
PointAddress PointAddress::in_prod(PointAddress idx, PointAddress blk) {
  PointAddress a;
  a.kind = Kind::ProdAt;
  a.sub.push_back(std::move(idx));
  a.sub.push_back(std::move(blk));
  return a;
}

void validate_address(const Term& t, const PointAddress& p) {
  using K = PointAddress::Kind;
  switch (t.kind) {
    case TermKind::Fin:
      if (p.kind != K::Nat || p.nat >= t.n) throw AddressError("bad position in finite chain");
      return;
    case TermKind::Omega:
      if (p.kind != K::Nat) throw AddressError("w positions are naturals");
      return;
    case TermKind::OmegaStar:
      if (p.kind != K::NegFromEnd || p.nat == 0)
        throw AddressError("w* positions count back from the end");
      return;
    case TermKind::Zeta:
      if (p.kind != K::Int) throw AddressError("zeta positions are integers");
      return;
    case TermKind::Eta:
      if (p.kind != K::Rational) throw AddressError("eta positions are rationals");
      return;
    case TermKind::Sum:
      if (p.kind != K::SumAt || p.part >= t.parts.size() || p.sub.size() != 1)
        throw AddressError("bad summand coordinate");
      validate_address(t.parts[p.part], p.sub[0]);
      return;
    case TermKind::Prod:
      if (p.kind != K::ProdAt || p.sub.size() != 2) throw AddressError("bad product coordinate");
      validate_address(t.index(), p.sub[0]);
      validate_address(t.block(), p.sub[1]);
      return;
  }
}

namespace {

Ordering ord_of(long long a, long long b) {
  return a < b ? Ordering::LT : a > b ? Ordering::GT : Ordering::EQ;
}

Ordering compare_impl(const Term& t, const PointAddress& p, const PointAddress& q) {
  switch (t.kind) {
    case TermKind::Fin:
    case TermKind::Omega: return ord_of((long long)p.nat, (long long)q.nat);
    case TermKind::OmegaStar: return ord_of(-(long long)p.nat, -(long long)q.nat);
    case TermKind::Zeta: return ord_of(p.z, q.z);
    case TermKind::Eta: {
      int c = cmp(p.q, q.q);
      return c < 0 ? Ordering::LT : c > 0 ? Ordering::GT : Ordering::EQ;
    }
    case TermKind::Sum:
      if (p.part != q.part) return ord_of(p.part, q.part);
      return compare_impl(t.parts[p.part], p.sub[0], q.sub[0]);
    case TermKind::Prod: {
      Ordering c = compare_impl(t.index(), p.sub[0], q.sub[0]);
      if (c != Ordering::EQ) return c;
      return compare_impl(t.block(), p.sub[1], q.sub[1]);
    }
  }
  return Ordering::EQ;
}

}  // namespace

Ordering compare_points(const Term& t, const PointAddress& p, const PointAddress& q) {
  validate_address(t, p);
  validate_address(t, q);
  return compare_impl(t, p, q);
}

Ordering compare_cuts(const Term& t, const Cut& a, const Cut& b) {
  if (a.sign != 0 || b.sign != 0) {
    if (a.sign == b.sign) return Ordering::EQ;
    return a.sign < b.sign ? Ordering::LT : Ordering::GT;
  }
  return compare_points(t, a.p, b.p);
}

// ---------------------------------------------------------------------------
// Open intervals
// ---------------------------------------------------------------------------

namespace {

Term subinterval_impl(const Term& t, const Cut& a, const Cut& b);

Term interval_fin(uint64_t lo_excl, uint64_t hi_excl) {
  // interval (lo, hi) of naturals
  return fin(hi_excl > lo_excl + 1 ? hi_excl - lo_excl - 1 : 0);
}

Term subinterval_impl(const Term& t, const Cut& a, const Cut& b) {
  const bool al = a.sign < 0, bu = b.sign > 0;
  switch (t.kind) {
    case TermKind::Fin: {
      uint64_t lo = al ? 0 : a.p.nat + 1;
      uint64_t hi = bu ? t.n : b.p.nat;
      return fin(hi > lo ? hi - lo : 0);
    }
    case TermKind::Omega:
      if (bu) return omega();
      return al ? fin(b.p.nat) : interval_fin(a.p.nat, b.p.nat);
    case TermKind::OmegaStar:
      if (al) return omega_star();
      // position -k has k-1 points above it
      return bu ? fin(a.p.nat - 1) : interval_fin(b.p.nat, a.p.nat);
    case TermKind::Zeta:
      if (al && bu) return zeta();
      if (al) return omega_star();
      if (bu) return omega();
      return interval_fin(0, (uint64_t)(b.p.z - a.p.z));
    case TermKind::Eta: return eta();
    case TermKind::Sum: {
      uint32_t ia = al ? 0 : a.p.part;
      uint32_t ib = bu ? (uint32_t)t.parts.size() - 1 : b.p.part;
      Cut a_sub = al ? Cut::neg_inf() : Cut::at(a.p.sub[0]);
      Cut b_sub = bu ? Cut::pos_inf() : Cut::at(b.p.sub[0]);
      if (ia == ib) return subinterval_impl(t.parts[ia], a_sub, b_sub);
      std::vector<Term> out;
      out.push_back(subinterval_impl(t.parts[ia], a_sub, Cut::pos_inf()));
      for (uint32_t i = ia + 1; i < ib; ++i) out.push_back(t.parts[i]);
      out.push_back(subinterval_impl(t.parts[ib], Cut::neg_inf(), b_sub));
      return normalize(sum(std::move(out)));
    }
    case TermKind::Prod: {
      const Term& B = t.block();
      const Term& I = t.index();
      if (!al && !bu && compare_impl(I, a.p.sub[0], b.p.sub[0]) == Ordering::EQ)
        return subinterval_impl(B, Cut::at(a.p.sub[1]), Cut::at(b.p.sub[1]));
      std::vector<Term> out;
      Cut ia = al ? Cut::neg_inf() : Cut::at(a.p.sub[0]);
      Cut ib = bu ? Cut::pos_inf() : Cut::at(b.p.sub[0]);
      if (!al) out.push_back(subinterval_impl(B, Cut::at(a.p.sub[1]), Cut::pos_inf()));
      out.push_back(normalize(prod(B, subinterval_impl(I, ia, ib))));
      if (!bu) out.push_back(subinterval_impl(B, Cut::neg_inf(), Cut::at(b.p.sub[1])));
      return normalize(sum(std::move(out)));
    }
  }
  return fin(0);
}

}  // namespace

Term subinterval(const Term& t, const Cut& a, const Cut& b) {
  if (a.is_point()) validate_address(t, a.p);
  if (b.is_point()) validate_address(t, b.p);
  if (compare_cuts(t, a, b) != Ordering::LT) throw AddressError("interval bounds not increasing");
  return normalize(subinterval_impl(t, a, b));
}

// ---------------------------------------------------------------------------
// First/last/successor/predecessor and block predicates
// ---------------------------------------------------------------------------

std::optional<PointAddress> first_point(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin:
      if (t.n == 0) return std::nullopt;
      return PointAddress::at_nat(0);
    case TermKind::Omega: return PointAddress::at_nat(0);
    case TermKind::OmegaStar:
    case TermKind::Zeta:
    case TermKind::Eta: return std::nullopt;
    case TermKind::Sum: {
      auto f = first_point(t.parts[0]);
      if (!f) return std::nullopt;
      return PointAddress::in_sum(0, *f);
    }
    case TermKind::Prod: {
      auto fi = first_point(t.index());
      auto fb = first_point(t.block());
      if (!fi || !fb) return std::nullopt;
      return PointAddress::in_prod(*fi, *fb);
    }
  }
  return std::nullopt;
}

std::optional<PointAddress> last_point(const Term& t) {
  switch (t.kind) {
    case TermKind::Fin:
      if (t.n == 0) return std::nullopt;
      return PointAddress::at_nat(t.n - 1);
    case TermKind::OmegaStar: return PointAddress::from_end(1);
    case TermKind::Omega:
    case TermKind::Zeta:
    case TermKind::Eta: return std::nullopt;
    case TermKind::Sum: {
      auto l = last_point(t.parts.back());
      if (!l) return std::nullopt;
      return PointAddress::in_sum((uint32_t)t.parts.size() - 1, *l);
    }
    case TermKind::Prod: {
      auto li = last_point(t.index());
      auto lb = last_point(t.block());
      if (!li || !lb) return std::nullopt;
      return PointAddress::in_prod(*li, *lb);
    }
  }
  return std::nullopt;
}

std::optional<PointAddress> succ_point(const Term& t, const PointAddress& p) {
  switch (t.kind) {
    case TermKind::Fin:
      if (p.nat + 1 < t.n) return PointAddress::at_nat(p.nat + 1);
      return std::nullopt;
    case TermKind::Omega: return PointAddress::at_nat(p.nat + 1);
    case TermKind::OmegaStar:
      if (p.nat > 1) return PointAddress::from_end(p.nat - 1);
      return std::nullopt;
    case TermKind::Zeta: return PointAddress::at_int(p.z + 1);
    case TermKind::Eta: return std::nullopt;
    case TermKind::Sum: {
      if (auto s = succ_point(t.parts[p.part], p.sub[0]))
        return PointAddress::in_sum(p.part, *s);
      auto l = last_point(t.parts[p.part]);
      if (l && *l == p.sub[0] && p.part + 1 < t.parts.size()) {
        if (auto f = first_point(t.parts[p.part + 1]))
          return PointAddress::in_sum(p.part + 1, *f);
      }
      return std::nullopt;
    }
    case TermKind::Prod: {
      if (auto s = succ_point(t.block(), p.sub[1]))
        return PointAddress::in_prod(p.sub[0], *s);
      auto l = last_point(t.block());
      if (l && *l == p.sub[1]) {
        auto si = succ_point(t.index(), p.sub[0]);
        auto f = first_point(t.block());
        if (si && f) return PointAddress::in_prod(*si, *f);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<PointAddress> pred_point(const Term& t, const PointAddress& p) {
  switch (t.kind) {
    case TermKind::Fin:
    case TermKind::Omega:
      if (p.nat > 0) return PointAddress::at_nat(p.nat - 1);
      return std::nullopt;
    case TermKind::OmegaStar: return PointAddress::from_end(p.nat + 1);
    case TermKind::Zeta: return PointAddress::at_int(p.z - 1);
    case TermKind::Eta: return std::nullopt;
    case TermKind::Sum: {
      if (auto s = pred_point(t.parts[p.part], p.sub[0]))
        return PointAddress::in_sum(p.part, *s);
      auto f = first_point(t.parts[p.part]);
      if (f && *f == p.sub[0] && p.part > 0) {
        if (auto l = last_point(t.parts[p.part - 1]))
          return PointAddress::in_sum(p.part - 1, *l);
      }
      return std::nullopt;
    }
    case TermKind::Prod: {
      if (auto s = pred_point(t.block(), p.sub[1]))
        return PointAddress::in_prod(p.sub[0], *s);
      auto f = first_point(t.block());
      if (f && *f == p.sub[1]) {
        auto pi = pred_point(t.index(), p.sub[0]);
        auto l = last_point(t.block());
        if (pi && l) return PointAddress::in_prod(*pi, *l);
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool sim1(const Term& t, const PointAddress& p, const PointAddress& q) {
  Ordering c = compare_points(t, p, q);
  if (c == Ordering::EQ) return true;
  const PointAddress& lo = (c == Ordering::LT) ? p : q;
  const PointAddress& hi = (c == Ordering::LT) ? q : p;
  return finite_size(subinterval(t, Cut::at(lo), Cut::at(hi))).has_value();
}

bool bs_leq(const Term& t, const PointAddress& p, uint64_t n) {
  validate_address(t, p);
  if (n == 0) return false;  // the block always contains p itself
  uint64_t count = 1;
  PointAddress cur = p;
  while (true) {
    auto s = succ_point(t, cur);
    if (!s) break;
    cur = *s;
    if (++count > n) return false;
  }
  cur = p;
  while (true) {
    auto s = pred_point(t, cur);
    if (!s) break;
    cur = *s;
    if (++count > n) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Address text form: ints for chain positions ("-2" counts back from the end
// of w*), "p/q" inside eta, "(i,sub)" for summands, "[idx,blk]" for products.
// ---------------------------------------------------------------------------

std::string address_to_text(const PointAddress& p) {
  using K = PointAddress::Kind;
  switch (p.kind) {
    case K::Nat: return std::to_string(p.nat);
    case K::NegFromEnd: return "-" + std::to_string(p.nat);
    case K::Int: return std::to_string(p.z);
    case K::Rational: return std::to_string(p.q.num) + "/" + std::to_string(p.q.den);
    case K::SumAt: return "(" + std::to_string(p.part) + "," + address_to_text(p.sub[0]) + ")";
    case K::ProdAt:
      return "[" + address_to_text(p.sub[0]) + "," + address_to_text(p.sub[1]) + "]";
  }
  return "";
}

std::string cut_to_text(const Cut& c) {
  if (c.sign < 0) return "-inf";
  if (c.sign > 0) return "+inf";
  return address_to_text(c.p);
}

namespace {

struct AddrParser {
  const Term& t;
  const std::string& s;
  size_t i = 0;

  long long integer() {
    bool neg = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) neg = s[i++] == '-';
    if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
      throw AddressError("expected a number in address");
    long long v = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) v = v * 10 + (s[i++] - '0');
    return neg ? -v : v;
  }

  PointAddress parse(const Term& term) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    switch (term.kind) {
      case TermKind::Fin:
      case TermKind::Omega: {
        long long v = integer();
        if (v < 0) throw AddressError("negative position in an ascending chain");
        return PointAddress::at_nat((uint64_t)v);
      }
      case TermKind::OmegaStar: {
        long long v = integer();
        if (v >= 0) throw AddressError("w* positions are negative");
        return PointAddress::from_end((uint64_t)(-v));
      }
      case TermKind::Zeta: return PointAddress::at_int(integer());
      case TermKind::Eta: {
        long long num = integer();
        if (i >= s.size() || s[i] != '/') throw AddressError("eta position needs p/q");
        ++i;
        long long den = integer();
        return PointAddress::at_rat(Rat(num, den));
      }
      case TermKind::Sum: {
        if (i >= s.size() || s[i] != '(') throw AddressError("expected (part,sub)");
        ++i;
        long long part = integer();
        if (part < 0 || (size_t)part >= term.parts.size()) throw AddressError("summand out of range");
        if (i >= s.size() || s[i] != ',') throw AddressError("expected ','");
        ++i;
        PointAddress sub = parse(term.parts[(size_t)part]);
        if (i >= s.size() || s[i] != ')') throw AddressError("expected ')'");
        ++i;
        return PointAddress::in_sum((uint32_t)part, std::move(sub));
      }
      case TermKind::Prod: {
        if (i >= s.size() || s[i] != '[') throw AddressError("expected [idx,blk]");
        ++i;
        PointAddress idx = parse(term.index());
        if (i >= s.size() || s[i] != ',') throw AddressError("expected ','");
        ++i;
        PointAddress blk = parse(term.block());
        if (i >= s.size() || s[i] != ']') throw AddressError("expected ']'");
        ++i;
        return PointAddress::in_prod(std::move(idx), std::move(blk));
      }
    }
    throw AddressError("unreachable");
  }
};

}  // namespace

PointAddress parse_address(const Term& t, const std::string& text) {
  AddrParser p{t, text};
  PointAddress a = p.parse(t);
  while (p.i < text.size() && std::isspace(static_cast<unsigned char>(text[p.i]))) ++p.i;
  if (p.i != text.size()) throw AddressError("trailing input in address");
  validate_address(t, a);
  return a;
}

}  // namespace bfo
