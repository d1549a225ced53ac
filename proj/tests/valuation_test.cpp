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

#include "qmt/oracle.hpp"
#include "support.hpp"

namespace qmt::test {
namespace {

// All nonzero maps E_Λ → Z2 that preserve ∧ and ∨ and send ∅ to 0, found
// by brute force over every truth assignment.
std::vector<Event> hom_blocks_by_brute_force(const Partition& p) {
  const auto events = p.events();
  const auto index = [&](Event e) {
    return static_cast<std::size_t>(std::lower_bound(events.begin(), events.end(), e) - events.begin());
  };
  std::vector<Event> out;
  for (std::uint64_t f = 1; f < (std::uint64_t{1} << events.size()); ++f) {
    auto v = [&](Event e) { return ((f >> index(e)) & 1) != 0; };
    bool hom = !v(Event{});
    for (Event a : events)
      for (Event b : events) hom = hom && v(a & b) == (v(a) && v(b)) && v(a | b) == (v(a) || v(b));
    if (!hom) continue;
    // The smallest event mapped to 1 identifies the valuation.
    Event least = p.omega();
    for (Event a : events)
      if (v(a)) least = least & a;
    out.push_back(least);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Homs, Examples) {
  const auto t = three_path();
  const auto top = homs(Partition::coarsest(3));
  ASSERT_EQ(top.size(), 1u);
  EXPECT_TRUE(top[0].eval(t.omega()));
  EXPECT_EQ(homs(part(t, "a|b,c")).size(), 2u);
  const auto r = homs(Partition::finest(3));
  ASSERT_EQ(r.size(), 3u);
  for (int i = 0; i < 3; ++i) EXPECT_EQ(r[static_cast<std::size_t>(i)].block(), Event::singleton(i));
  expect_error(ErrorCode::NotABlock, [&] { HomValuation(part(t, "a|b,c"), ev(t, {"b"})); });
}

TEST(Homs, AreExactlyTheNonzeroHomomorphisms) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : enumerate_partitions(n)) {
      if (p.size() > 4) continue;
      std::vector<Event> blocks;
      for (const auto& v : homs(p)) blocks.push_back(v.block());
      std::sort(blocks.begin(), blocks.end());
      EXPECT_EQ(blocks, hom_blocks_by_brute_force(p));
      EXPECT_EQ(homs(p).size(), static_cast<std::size_t>(p.size()));
    }
}

TEST(EvalHom, Examples) {
  const auto t = three_path();
  EXPECT_TRUE(eval_hom(HomValuation(Partition::finest(3), ev(t, {"a"})), ev(t, {"a", "c"})));
  const HomValuation a(part(t, "a|b,c"), ev(t, {"a"}));
  expect_error(ErrorCode::OutsideDomain, [&] { eval_hom(a, ev(t, {"a", "b"})); });
  EXPECT_TRUE(eval_hom(HomValuation(Partition::coarsest(3), t.omega()), t.omega()));
}

TEST(Cl, Examples) {
  const auto t = three_path();
  const auto c = cl(t, part(t, "a,c|b"));
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].block(), ev(t, {"b"}));
  EXPECT_EQ(cl(coin(), Partition::finest(4)).size(), 4u);
  // {b,c} is a null block of a decoherent partition.
  const auto d = cl(t, part(t, "a|b,c"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].block(), ev(t, {"a"}));
  expect_error(ErrorCode::SpaceMismatch, [&] { cl(t, Partition::finest(4)); });
}

TEST(Restrict, Examples) {
  const auto t = three_path();
  const auto fine = Partition::finest(3);
  const auto mid = part(t, "a|b,c");
  EXPECT_EQ(restrict_hom(HomValuation(fine, ev(t, {"a"})), mid).block(), ev(t, {"a"}));
  EXPECT_EQ(restrict_hom(HomValuation(fine, ev(t, {"b"})), mid).block(), ev(t, {"b", "c"}));
  for (const auto& phi : homs(fine))
    EXPECT_EQ(restrict_hom(phi, Partition::coarsest(3)).block(), t.omega());
  expect_error(ErrorCode::NotComparable,
               [&] { restrict_hom(HomValuation(mid, ev(t, {"a"})), part(t, "a,b|c")); });
}

TEST(Restrict, Functorial) {
  for (int n = 1; n <= 5; ++n) {
    const auto all = enumerate_partitions(n);
    for (const auto& x : all)
      for (const auto& phi : homs(x)) {
        ASSERT_EQ(restrict_hom(phi, x), phi);
        for (const auto& y : all) {
          if (!refines(x, y)) continue;
          const auto via = restrict_hom(phi, y);
          // Restriction agrees with φ on E_y.
          for (Event b : y.events()) ASSERT_EQ(via.eval(b), phi.eval(b));
          for (const auto& z : all) {
            if (refines(y, z)) {
              ASSERT_EQ(restrict_hom(via, z), restrict_hom(phi, z));
            }
          }
        }
      }
  }
}

TEST(Restrict, SurjectiveOntoCoarserHoms) {
  for (const auto& x : enumerate_partitions(4))
    for (const auto& y : enumerate_partitions(4)) {
      if (!refines(x, y)) continue;
      std::vector<HomValuation> images;
      for (const auto& phi : homs(x)) images.push_back(restrict_hom(phi, y));
      std::sort(images.begin(), images.end());
      images.erase(std::unique(images.begin(), images.end()), images.end());
      auto expected = homs(y);
      std::sort(expected.begin(), expected.end());
      EXPECT_EQ(images, expected);
    }
}

TEST(Pooled, Examples) {
  const auto t = three_path();
  const auto poset = build_poset(t);
  const auto vd = pooled(t, poset, ValuationKind::VD);
  EXPECT_EQ(vd.members.size(), 5u);
  const auto vc = pooled(t, poset, ValuationKind::VC);
  EXPECT_EQ(vc.members.size(), 3u);
  for (const auto& v : vc.members) {
    EXPECT_NE(v.block(), ev(t, {"b", "c"}));
    EXPECT_NE(v.block(), ev(t, {"a", "c"}));
    EXPECT_NE(std::find(vd.members.begin(), vd.members.end(), v), vd.members.end());
  }
  EXPECT_EQ(pooled(t, poset, ValuationKind::VPD).members.size(), 1u);

  const auto c = coin();
  std::size_t pairs = 0;
  for (const auto& p : enumerate_partitions(4)) pairs += static_cast<std::size_t>(p.size());
  EXPECT_EQ(pooled(c, build_poset(c), ValuationKind::VD).members.size(), pairs);
}

TEST(LogicalFramework, DomainsHostEveryValuation) {
  const auto t = three_path();
  const auto poset = build_poset(t);
  for (auto kind : {ValuationKind::VD, ValuationKind::VC, ValuationKind::VPD, ValuationKind::VPDPreclusive}) {
    const auto fw = logical_framework(t, poset, kind);
    EXPECT_EQ(fw.truth_values, "Z2");
    for (const auto& v : fw.valuations.members) {
      const bool hosted = std::any_of(fw.domains.begin(), fw.domains.end(),
                                      [&](const Sublattice& s) { return s.source == v.partition(); });
      EXPECT_TRUE(hosted);
    }
  }
  EXPECT_EQ(logical_framework(t, poset, ValuationKind::VD).domains.size(), 3u);
}

TEST(SupportRelation, Examples) {
  const auto t = three_path();
  const HomValuation a(part(t, "a|b,c"), ev(t, {"a"}));
  EXPECT_EQ(a.support(), (std::vector<Event>{ev(t, {"a"}), t.omega()}));
  EXPECT_TRUE(support_relation_check(a));
  const HomValuation top(Partition::coarsest(3), t.omega());
  EXPECT_EQ(top.support(), (std::vector<Event>{t.omega()}));
  EXPECT_TRUE(support_relation_check(top));
}

// Properties over seeded suites.

TEST(ValuationProperties, SupportRelationEverywhere) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : enumerate_partitions(n))
      for (const auto& phi : homs(p)) ASSERT_TRUE(support_relation_check(phi));
}

TEST(ValuationProperties, ClOnDecoherentMeansPositiveBlocks) {
  for (const auto& t : quantum_suite(60, 5)) {
    const auto poset = build_poset(t);
    for (auto i : sub_poset(poset, PosetTagName::D).members) {
      std::vector<Event> positive;
      for (Event b : poset.at(i).blocks())
        if (t.mu(b) > 0) positive.push_back(b);
      std::vector<Event> got;
      for (const auto& v : cl(t, poset.at(i))) got.push_back(v.block());
      EXPECT_EQ(got, positive);
    }
  }
}

TEST(ValuationProperties, VcInsideVd) {
  for (const auto& t : quantum_suite(40, 5)) {
    const auto poset = build_poset(t);
    auto vd = pooled(t, poset, ValuationKind::VD).members;
    std::sort(vd.begin(), vd.end());
    for (const auto& v : pooled(t, poset, ValuationKind::VC).members)
      EXPECT_TRUE(std::binary_search(vd.begin(), vd.end(), v));
    const auto pd = sub_poset(poset, PosetTagName::PD);
    for (const auto& v : pooled(t, poset, ValuationKind::VPD).members)
      EXPECT_TRUE(pd.contains(poset.require_index(v.partition())));
  }
}

}  // namespace
}  // namespace qmt::test
