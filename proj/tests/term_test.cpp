#include "doctest.h"

#include "bfo/probe.hpp"
#include "bfo/term.hpp"

using namespace bfo;

namespace {

PointAddress pa_nat(uint64_t i) { return PointAddress::at_nat(i); }

// small deterministic pool of terms used by several property checks
std::vector<Term> term_pool() {
  std::vector<Term> pool;
  for (const char* s :
       {"0", "1", "2", "5", "w", "w*", "zeta", "eta", "w + w", "1 + w", "w + 1", "zeta + zeta",
        "eta + 2 + eta", "(eta + 2 + eta) * eta", "zeta * 2", "zeta * w", "zeta * eta",
        "w * w", "zeta^2", "w* + 3 + w", "eta + 1 + eta + 1", "2 * eta", "(w + w*) * 3"})
    pool.push_back(parse_term(s));
  return pool;
}

}  // namespace

TEST_CASE("parsing and grammar round trips") {
  CHECK(parse_term("(eta + 2 + eta) * eta") ==
        prod(sum({eta(), fin(2), eta()}), eta()));
  CHECK(parse_term("0 + w") == omega());
  CHECK(parse_term("1 * 1") == fin(1));
  CHECK(parse_term("zeta^3") == prod(zeta(), prod(zeta(), zeta())));
  CHECK(parse_term("w*") == omega_star());

  for (const auto& t : term_pool()) {
    CAPTURE(to_text(t));
    CHECK(parse_term(to_text(t)) == t);
  }

  CHECK_THROWS_AS(parse_term("w + + w"), TermParseError);
  CHECK_THROWS_AS(parse_term("(w"), TermParseError);
  CHECK_THROWS_AS(parse_term("99999999999999999999"), TermParseError);
}

TEST_CASE("normalization") {
  CHECK(normalize(sum({fin(2), fin(3)})) == fin(5));
  // nested sums flatten; a finite part before w is absorbed outright
  CHECK(normalize(sum({omega(), sum({fin(1), eta()})})) == sum({omega(), fin(1), eta()}));
  CHECK(normalize(sum({fin(1), sum({omega(), eta()})})) == sum({omega(), eta()}));
  CHECK(normalize(prod(zeta(), fin(1))) == zeta());
  CHECK(normalize(prod(fin(1), zeta())) == zeta());
  CHECK(normalize(sum({eta(), eta()})) == eta());
  CHECK(normalize(sum({eta(), fin(1), eta()})) == eta());
  CHECK(normalize(sum({fin(3), omega()})) == omega());
  CHECK(normalize(sum({omega_star(), fin(3)})) == omega_star());
  CHECK(normalize(sum({omega_star(), omega()})) == zeta());
  CHECK(normalize(prod(fin(2), omega())) == omega());
  CHECK(normalize(prod(eta(), omega())) == eta());
  CHECK(normalize(prod(prod(zeta(), zeta()), fin(2))) ==
        prod(zeta(), prod(zeta(), fin(2))));

  for (const auto& t : term_pool()) {
    CAPTURE(to_text(t));
    CHECK(normalize(t) == t);  // parse_term normalizes; idempotence
    CHECK(reverse_term(reverse_term(t)) == t);
  }
  CHECK(reverse_term(omega()) == omega_star());
  CHECK(reverse_term(zeta()) == zeta());
  // 1 + w normalizes to w, and w* + 1 to w*, so the reversal pair collapses
  CHECK(reverse_term(parse_term("1 + w")) == parse_term("w* + 1"));
  CHECK(reverse_term(parse_term("w + 1")) == parse_term("1 + w*"));
}

TEST_CASE("point comparison is a total order on probe sets") {
  for (const auto& t : term_pool()) {
    auto pr = expand_probe(t, 9);
    CAPTURE(to_text(t));
    for (size_t i = 0; i < pr.addresses.size(); ++i)
      for (size_t j = 0; j < pr.addresses.size(); ++j) {
        Ordering c = compare_points(t, pr.addresses[i], pr.addresses[j]);
        Ordering d = compare_points(t, pr.addresses[j], pr.addresses[i]);
        CHECK((int)c == -(int)d);  // antisymmetry
        CHECK((i == j) == (c == Ordering::EQ));
        for (size_t k = 0; k < pr.addresses.size(); ++k) {
          // transitivity via index order: addresses are sorted
          if (i < j && j < k)
            CHECK(compare_points(t, pr.addresses[i], pr.addresses[k]) == Ordering::LT);
        }
      }
  }
  CHECK(compare_points(omega(), pa_nat(3), pa_nat(5)) == Ordering::LT);
  CHECK(compare_points(zeta(), PointAddress::at_int(-2), PointAddress::at_int(-2)) ==
        Ordering::EQ);
  Term t = sum({omega(), eta()});
  CHECK(compare_points(t, PointAddress::in_sum(0, pa_nat(7)),
                       PointAddress::in_sum(1, PointAddress::at_rat(Rat(1, 2)))) ==
        Ordering::LT);
}

TEST_CASE("subinterval closed forms") {
  CHECK(subinterval(omega(), Cut::neg_inf(), Cut::at(pa_nat(4))) == fin(4));
  CHECK(subinterval(zeta(), Cut::at(PointAddress::at_int(0)), Cut::pos_inf()) == omega());
  Term z2 = prod(zeta(), fin(2));
  auto p = PointAddress::in_prod(pa_nat(0), PointAddress::at_int(0));
  auto q = PointAddress::in_prod(pa_nat(1), PointAddress::at_int(0));
  CHECK(subinterval(z2, Cut::at(p), Cut::at(q)) == sum({omega(), omega_star()}));
  CHECK(subinterval(eta(), Cut::at(PointAddress::at_rat(Rat(1, 4))),
                    Cut::at(PointAddress::at_rat(Rat(1, 2)))) == eta());
  CHECK_THROWS_AS(subinterval(omega(), Cut::at(pa_nat(4)), Cut::at(pa_nat(4))), AddressError);
  CHECK_THROWS_AS(compare_points(omega(), PointAddress::at_int(0), pa_nat(1)), AddressError);
}

TEST_CASE("subinterval composes") {
  // nested subintervals agree with directly translated bounds
  Term w = omega();
  Term sub = subinterval(w, Cut::neg_inf(), Cut::at(pa_nat(20)));
  REQUIRE(sub == fin(20));
  CHECK(subinterval(sub, Cut::at(pa_nat(3)), Cut::at(pa_nat(10))) ==
        subinterval(w, Cut::at(pa_nat(3)), Cut::at(pa_nat(10))));

  Term z2 = prod(zeta(), fin(2));
  auto a = PointAddress::in_prod(pa_nat(0), PointAddress::at_int(0));
  auto b = PointAddress::in_prod(pa_nat(1), PointAddress::at_int(0));
  Term mid = subinterval(z2, Cut::at(a), Cut::at(b));
  REQUIRE(mid == sum({omega(), omega_star()}));
  // position 5 of the tail copy is integer 6 of the first zeta, and the 6th
  // point from the end of the w* piece is integer -6 of the second
  auto c = PointAddress::in_sum(0, pa_nat(5));
  auto d = PointAddress::in_sum(1, PointAddress::from_end(6));
  auto c_direct = PointAddress::in_prod(pa_nat(0), PointAddress::at_int(6));
  auto d_direct = PointAddress::in_prod(pa_nat(1), PointAddress::at_int(-6));
  CHECK(subinterval(mid, Cut::at(c), Cut::at(d)) ==
        subinterval(z2, Cut::at(c_direct), Cut::at(d_direct)));

  Term t = parse_term("w + 3 + w*");
  CHECK(subinterval(t, Cut::neg_inf(), Cut::pos_inf()) == t);
}

TEST_CASE("sim1 and block-size predicates") {
  CHECK(sim1(zeta(), PointAddress::at_int(-5), PointAddress::at_int(100)));
  Term ww = sum({omega(), omega()});
  CHECK_FALSE(sim1(ww, PointAddress::in_sum(0, pa_nat(0)), PointAddress::in_sum(1, pa_nat(0))));
  CHECK_FALSE(sim1(eta(), PointAddress::at_rat(Rat(0, 1)), PointAddress::at_rat(Rat(1, 1))));

  Term b = sum({eta(), fin(2), eta()});
  auto first_of_pair = PointAddress::in_sum(1, pa_nat(0));
  CHECK(bs_leq(b, first_of_pair, 2));
  CHECK_FALSE(bs_leq(b, first_of_pair, 1));
  CHECK_FALSE(bs_leq(omega(), pa_nat(0), 5));
  CHECK(bs_leq(eta(), PointAddress::at_rat(Rat(1, 2)), 1));
}

TEST_CASE("sim1 is a convex equivalence on probes") {
  for (const auto& t : term_pool()) {
    auto pr = expand_probe(t, 8);
    CAPTURE(to_text(t));
    auto& as = pr.addresses;
    for (size_t i = 0; i < as.size(); ++i)
      for (size_t j = 0; j < as.size(); ++j) {
        CHECK(sim1(t, as[i], as[j]) == sim1(t, as[j], as[i]));
        if (i < j && sim1(t, as[i], as[j]))
          for (size_t k = i + 1; k < j; ++k) CHECK(sim1(t, as[i], as[k]));
      }
  }
}

TEST_CASE("probes are deterministic and embed order") {
  auto p1 = expand_probe(parse_term("(eta + 2 + eta) * eta"), 12);
  auto p2 = expand_probe(parse_term("(eta + 2 + eta) * eta"), 12);
  REQUIRE(p1.addresses.size() == 12);
  for (size_t i = 0; i < 12; ++i) CHECK(p1.addresses[i] == p2.addresses[i]);

  auto f = expand_probe(fin(3), 10);
  CHECK(f.addresses.size() == 3);
  auto w = expand_probe(omega(), 3);
  REQUIRE(w.addresses.size() == 3);
  CHECK(w.addresses[2] == pa_nat(2));
  auto e = expand_probe(eta(), 3);
  CHECK(e.addresses.size() == 3);
}

TEST_CASE("address text round trips") {
  Term t = parse_term("(eta + 2 + eta) * eta + zeta * 2");
  auto pr = expand_probe(t, 10);
  for (auto& a : pr.addresses) {
    CHECK(parse_address(t, address_to_text(a)) == a);
  }
}
