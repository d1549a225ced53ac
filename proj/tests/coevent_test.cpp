// Copyright 2026 The qmt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <random>

#include "qmt/oracle.hpp"
#include "support.hpp"

namespace qmt::test {
namespace {

oracle::Table table_of(const Coevent& phi) {
  oracle::Table t(phi.support().size());
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = phi.support().test(m);
  return t;
}

Coevent coevent_from_mask(int n, std::uint64_t support_mask) {
  boost::dynamic_bitset<> bits(std::size_t{1} << n);
  for (std::size_t m = 0; m < bits.size(); ++m) bits[m] = (support_mask >> m) & 1;
  return Coevent(n, bits);
}

std::vector<bool> nulls_of(const ExactTheory& t) { return oracle::null_table(t.mu_table(), t.field()); }

std::vector<oracle::Blocks> decoherent_blocks(const ExactTheory& t) {
  std::vector<oracle::Blocks> out;
  for (const auto& p : enumerate_partitions(t.size()))
    if (oracle::decoherent_all_pairs(t.mu_table(), t.field(), p.blocks())) out.push_back(p.blocks());
  return out;
}

TEST(Eval, Examples) {
  const auto a = co_dual(3, Event(0b001));
  EXPECT_TRUE(eval(a, Event(0b011)));
  EXPECT_FALSE(eval(a, Event(0b010)));
  for (Event::mask_type m = 1; m < 8; ++m) EXPECT_TRUE(co_dual(3, Event(m)).eval(Event(0b111)));
  expect_error(ErrorCode::ForeignEvent, [&] { a.eval(Event(0b1000)); });
  expect_error(ErrorCode::ForeignEvent, [&] { a.to_coevent().eval(Event(0b1000)); });
}

TEST(Coevent, Construction) {
  expect_error(ErrorCode::ZeroCoevent, [] { Coevent::from_support(2, {}); });
  expect_error(ErrorCode::EmptyDual, [] { co_dual(2, Event{}); });
  expect_error(ErrorCode::ForeignEvent, [] { Coevent::from_support(2, {Event(0b100)}); });
}

TEST(Multiplicative, Examples) {
  EXPECT_TRUE(is_multiplicative(co_dual(3, Event(0b001)).to_coevent()));
  const auto two = Coevent::from_support(2, {Event(0b01), Event(0b10)});
  EXPECT_FALSE(is_multiplicative(two));
  const auto w = multiplicative_witness(two);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->first, Event(0b01));
  EXPECT_EQ(w->second, Event(0b10));
  for (int n = 2; n <= 4; ++n) {
    std::vector<Event> all_but_empty;
    for (Event::mask_type m = 1; m < (Event::mask_type{1} << n); ++m) all_but_empty.push_back(Event(m));
    const auto phi = Coevent::from_support(n, all_but_empty);
    EXPECT_FALSE(is_multiplicative(phi));
    EXPECT_FALSE(oracle::multiplicative_by_pairs(table_of(phi)));
    const auto pair = multiplicative_witness(phi);
    ASSERT_TRUE(pair);
    EXPECT_FALSE(pair->first.intersects(pair->second));
  }
}

TEST(Multiplicative, FilterTestAgreesExhaustively) {
  for (int n = 1; n <= 3; ++n) {
    const std::uint64_t count = std::uint64_t{1} << (std::size_t{1} << n);
    for (std::uint64_t s = 1; s < count; ++s) {
      const auto phi = coevent_from_mask(n, s);
      const bool m = is_multiplicative(phi);
      ASSERT_EQ(m, is_filter(phi)) << n << ' ' << s;
      ASSERT_EQ(m, oracle::multiplicative_by_pairs(table_of(phi))) << n << ' ' << s;
    }
  }
}

TEST(Multiplicative, FilterTestAgreesOnRandomSupportsN4) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::uint64_t> draw(1, 0xffff);
  for (int i = 0; i < 3000; ++i) {
    const auto phi = coevent_from_mask(4, draw(rng));
    ASSERT_EQ(is_multiplicative(phi), is_filter(phi));
    ASSERT_EQ(is_multiplicative(phi), oracle::multiplicative_by_pairs(table_of(phi)));
  }
  // Every principal filter is hit as well.
  for (Event::mask_type a = 1; a < 16; ++a) EXPECT_TRUE(is_filter(co_dual(4, Event(a)).to_coevent()));
}

TEST(Dual, Examples) {
  EXPECT_EQ(dual(co_dual(3, Event(0b011)).to_coevent()).dual(), Event(0b011));
  EXPECT_EQ(co_dual(3, Event(0b111)).to_coevent().support_events(), (std::vector<Event>{Event(0b111)}));
  expect_error(ErrorCode::NotMultiplicative,
               [] { dual(Coevent::from_support(2, {Event(0b01), Event(0b10)})); });
  // The improper filter (everything, ∅ included) is multiplicative with an empty dual.
  expect_error(ErrorCode::EmptyDual, [] { dual(coevent_from_mask(2, 0xf)); });
}

TEST(Dual, InvolutionExhaustive) {
  for (int n = 1; n <= 5; ++n)
    for (Event::mask_type a = 1; a < (Event::mask_type{1} << n); ++a) {
      const auto star = co_dual(n, Event(a));
      ASSERT_EQ(dual(star.to_coevent()), star);
      ASSERT_EQ(table_of(star.to_coevent()), oracle::star_table(n, Event(a)));
    }
}

TEST(Preclusive, Examples) {
  const auto t = three_path();
  EXPECT_FALSE(is_preclusive(t, co_dual(3, ev(t, {"a"}))));  // {a} ⊆ {a,c}, a null event
  EXPECT_TRUE(is_preclusive(t, co_dual(3, ev(t, {"a", "b"}))));
  EXPECT_TRUE(is_preclusive(t, co_dual(3, t.omega())));
  EXPECT_TRUE(is_preclusive(coin(), co_dual(4, Event(0b1111))));
  EXPECT_EQ(is_preclusive(t, co_dual(3, ev(t, {"c"})).to_coevent()), is_preclusive(t, co_dual(3, ev(t, {"c"}))));
  expect_error(ErrorCode::SpaceMismatch, [&] { is_preclusive(t, co_dual(2, Event(1))); });
}

TEST(Dominates, Examples) {
  const auto ab = co_dual(3, Event(0b011));
  const auto a = co_dual(3, Event(0b001));
  EXPECT_TRUE(dominates(ab, a));
  EXPECT_FALSE(dominates(a, ab));
  EXPECT_TRUE(dominates(a, a));
  EXPECT_TRUE(dominates(ab.to_coevent(), a.to_coevent()));
  EXPECT_FALSE(dominates(a.to_coevent(), ab.to_coevent()));
  expect_error(ErrorCode::SpaceMismatch, [&] { dominates(a, co_dual(2, Event(1))); });
}

TEST(Dominates, MatchesDualInclusionExhaustive) {
  for (int n = 1; n <= 4; ++n)
    for (Event::mask_type x = 1; x < (Event::mask_type{1} << n); ++x)
      for (Event::mask_type y = 1; y < (Event::mask_type{1} << n); ++y) {
        const auto phi = co_dual(n, Event(x)), psi = co_dual(n, Event(y));
        const bool by_support = dominates(phi.to_coevent(), psi.to_coevent());
        ASSERT_EQ(dominates(phi, psi), by_support);
        ASSERT_EQ(by_support, Event(y).subset_of(Event(x)));
        ASSERT_EQ(by_support, oracle::dominates_by_scan(table_of(phi.to_coevent()), table_of(psi.to_coevent())));
      }
}

TEST(Classical, Examples) {
  const auto t = three_path();
  const auto a = co_dual(3, ev(t, {"a"}));
  EXPECT_TRUE(is_classical_on(a, part(t, "a|b,c")));
  EXPECT_TRUE(is_classical_on(a, part(t, "a,c|b")));
  EXPECT_FALSE(is_classical_on(co_dual(3, ev(t, {"a", "b"})), Partition::finest(3)));
}

TEST(Classical, MatchesHomRestrictionForMultiplicative) {
  for (int n = 1; n <= 4; ++n)
    for (const auto& p : enumerate_partitions(n))
      for (Event::mask_type x = 1; x < (Event::mask_type{1} << n); ++x) {
        const auto phi = co_dual(n, Event(x));
        ASSERT_EQ(is_classical_on(phi, p), is_classical_on(phi.to_coevent(), p));
        ASSERT_EQ(is_classical_on(phi, p), restricts_to_hom(phi.to_coevent(), p));
        ASSERT_EQ(is_classical_on(phi, p), oracle::classical_by_count(table_of(phi.to_coevent()), p.blocks()));
      }
}

TEST(MultiplicativeScheme, Examples) {
  const auto c = coin();
  EXPECT_EQ(duals(multiplicative_scheme(c)),
            (std::vector<Event>{Event(1), Event(2), Event(4), Event(8)}));
  const auto t = three_path();
  EXPECT_EQ(duals(multiplicative_scheme(t)), (std::vector<Event>{ev(t, {"a", "b"})}));
  EXPECT_EQ(duals(multiplicative_scheme(t, Minimality::Literal)), (std::vector<Event>{t.omega()}));
  EXPECT_EQ(multiplicative_scheme(t).minimality, Minimality::Primitive);
  EXPECT_EQ(duals(multiplicative_scheme(single())), (std::vector<Event>{Event(1)}));
}

TEST(MultiplicativeScheme, PositiveSingletonsGiveAllSingletons) {
  const auto c = coin();
  const auto r = multiplicative_scheme(c);
  for (int i = 0; i < 4; ++i) EXPECT_TRUE(r.contains(Event::singleton(i)));
}

TEST(ConsM, Examples) {
  const auto t = three_path();
  const auto bt = build_poset(t);
  // {a,b}* and Ω* are split by the two-block decoherent partitions; the
  // singletons are precluded. Nothing survives.
  EXPECT_TRUE(m_pc(t, bt).empty());
  const auto r = cons_m(t, bt);
  EXPECT_TRUE(r.empty());
  EXPECT_EQ(r.scheme, "Cons_M");

  const auto c = coin();
  const auto bc = build_poset(c);
  EXPECT_EQ(m_pc(c, bc).size(), 4u);
  EXPECT_EQ(duals(cons_m(c, bc)), duals(multiplicative_scheme(c)));
}

TEST(ConsM, TrivialDecoherenceLeavesAllPreclusive) {
  const auto t = random_quantum_theory(1, 3);
  const auto poset = build_poset(t);
  ASSERT_EQ(sub_poset(poset, PosetTagName::D).size(), 1u);
  EXPECT_EQ(m_pc(t, poset), preclusive_multiplicative(t));
}

TEST(ConsDC, Examples) {
  const auto t = three_path();
  const auto bt = build_poset(t);
  const auto d = cons_d(t, bt);
  EXPECT_EQ(d.reading, Reading::Literal);
  EXPECT_EQ(duals(d), (std::vector<Event>{ev(t, {"a", "c"}), ev(t, {"b", "c"}), t.omega()}));
  EXPECT_EQ(duals(cons_c(t, bt)), (std::vector<Event>{t.omega()}));
  // Loose reading adds the singleton blocks {a} and {b}.
  EXPECT_EQ(duals(cons_d(t, bt, Reading::Loose)),
            (std::vector<Event>{ev(t, {"a"}), ev(t, {"b"}), ev(t, {"a", "c"}), ev(t, {"b", "c"}), t.omega()}));
  EXPECT_EQ(duals(cons_c(t, bt, Reading::Loose)), (std::vector<Event>{ev(t, {"a"}), ev(t, {"b"}), t.omega()}));

  const auto c = coin();
  EXPECT_EQ(cons_d(c, build_poset(c)).coevents.size(), 15u);
}

// Properties over seeded suites.

TEST(SchemeProperties, MultiplicativeSchemeReducesToClassical) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto t = random_probability_theory(seed, 1 + static_cast<int>(seed % 5));
    std::vector<Event> expected;
    for (int i = 0; i < t.size(); ++i)
      if (t.mu(Event::singleton(i)) > 0) expected.push_back(Event::singleton(i));
    EXPECT_EQ(duals(multiplicative_scheme(t)), expected);
    std::vector<Event> cl_duals;
    for (const auto& v : cl(t, Partition::finest(t.size()))) cl_duals.push_back(v.block());
    EXPECT_EQ(cl_duals, expected);
  }
}

TEST(SchemeProperties, AgreeWithOracles) {
  for (const auto& t : quantum_suite(60, 5)) {
    const int n = t.size();
    const auto poset = build_poset(t);
    const auto nulls = nulls_of(t);
    const auto candidates = oracle::preclusive_multiplicative_duals(n, nulls);
    EXPECT_EQ(duals(multiplicative_scheme(t)), oracle::minimal_duals(n, candidates, true));
    EXPECT_EQ(duals(multiplicative_scheme(t, Minimality::Literal)), oracle::minimal_duals(n, candidates, false));
    const auto dec = decoherent_blocks(t);
    EXPECT_EQ(duals(cons_d(t, poset)), oracle::consistent_duals(n, dec, nulls, true, false));
    EXPECT_EQ(duals(cons_c(t, poset)), oracle::consistent_duals(n, dec, nulls, true, true));
    EXPECT_EQ(duals(cons_d(t, poset, Reading::Loose)), oracle::consistent_duals(n, dec, nulls, false, false));
    EXPECT_EQ(duals(cons_c(t, poset, Reading::Loose)), oracle::consistent_duals(n, dec, nulls, false, true));
  }
}

TEST(SchemeProperties, ClassicalOnPreclusivelySeparableDecoherent) {
  for (const auto& t : quantum_suite(60, 5)) {
    const auto poset = build_poset(t);
    const auto m = multiplicative_scheme(t);
    for (auto i : sub_poset(poset, PosetTagName::PD).members) {
      const Partition& p = poset.at(i);
      for (const auto& phi : m.coevents) EXPECT_TRUE(is_classical_on(phi, p));
      // Every preclusive valuation on E_Λ extends to some member of M.
      const auto events = p.events();
      for (const auto& psi : cl(t, p)) {
        const bool extends = std::any_of(m.coevents.begin(), m.coevents.end(), [&](const auto& phi) {
          return std::all_of(events.begin(), events.end(),
                             [&](Event b) { return phi.eval(b) == psi.eval(b); });
        });
        EXPECT_TRUE(extends);
      }
    }
  }
}

TEST(SchemeProperties, ConsistentSchemeMembership) {
  for (const auto& t : quantum_suite(60, 5)) {
    const auto poset = build_poset(t);
    for (const auto& phi : cons_d(t, poset).coevents) EXPECT_TRUE(is_multiplicative(phi.to_coevent()));
    for (const auto& phi : cons_c(t, poset).coevents) EXPECT_TRUE(is_preclusive(t, phi));
    const auto d = duals(cons_d(t, poset));
    for (Event a : duals(cons_c(t, poset))) EXPECT_TRUE(std::binary_search(d.begin(), d.end(), a));
    for (const auto& phi : cons_m(t, poset).coevents) {
      EXPECT_TRUE(is_preclusive(t, phi));
      for (auto i : sub_poset(poset, PosetTagName::D).members) EXPECT_TRUE(is_classical_on(phi, poset.at(i)));
    }
  }
}

}  // namespace
}  // namespace qmt::test
