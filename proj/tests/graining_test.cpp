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

std::vector<std::size_t> indices(const GrainingPoset& poset, const ExactTheory& t,
                                 const std::vector<std::string>& texts) {
  std::vector<std::size_t> out;
  for (const auto& s : texts) out.push_back(poset.require_index(part(t, s)));
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Partition, Validation) {
  expect_error(ErrorCode::InvalidPartition, [] { Partition::from_blocks(3, {Event(0b011), Event(0b110)}); });
  expect_error(ErrorCode::InvalidPartition, [] { Partition::from_blocks(3, {Event(0b011)}); });
  expect_error(ErrorCode::InvalidPartition, [] { Partition::from_blocks(3, {Event(0b111), Event{}}); });
  const auto p = Partition::from_blocks(3, {Event(0b110), Event(0b001)});
  EXPECT_EQ(p.blocks(), (std::vector<Event>{Event(0b001), Event(0b110)}));
  EXPECT_EQ(p.labels(), (std::vector<int>{0, 1, 1}));
}

TEST(Partition, BlockQueries) {
  const auto t = three_path();
  const auto p = part(t, "a|b,c");
  EXPECT_TRUE(p.has_block(ev(t, {"b", "c"})));
  EXPECT_FALSE(p.has_block(ev(t, {"b"})));
  EXPECT_EQ(p.block_containing(ev(t, {"b"})), ev(t, {"b", "c"}));
  EXPECT_TRUE(p.block_containing(ev(t, {"a", "b"})).empty());
  EXPECT_TRUE(p.generates(ev(t, {"b", "c"})));
  EXPECT_FALSE(p.generates(ev(t, {"a", "b"})));
  EXPECT_EQ(Partition::isolating(3, ev(t, {"a", "c"})), part(t, "a,c|b"));
  EXPECT_EQ(Partition::isolating(3, t.omega()), Partition::coarsest(3));
}

TEST(Partition, FormatRoundTrip) {
  const auto t = coin();
  for (const auto& p : enumerate_partitions(4)) EXPECT_EQ(part(t, format_partition(t.space(), p)), p);
  expect_error(ErrorCode::InvalidPartition, [&] { part(t, "hh|hh,ht,th,tt"); });
  expect_error(ErrorCode::InvalidPartition, [&] { part(t, "hh,ht"); });
  expect_error(ErrorCode::InvalidPartition, [&] { part(t, "hh||ht,th,tt"); });
}

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_partitions(1).size(), 1u);
  EXPECT_EQ(enumerate_partitions(3).size(), 5u);
  EXPECT_EQ(enumerate_partitions(4).size(), 15u);
  EXPECT_EQ(enumerate_partitions(6).size(), 203u);
  expect_error(ErrorCode::CapExceeded, [] { enumerate_partitions(11); });
}

TEST(Enumerate, AgreesWithInsertionOracle) {
  for (int n = 1; n <= 7; ++n) {
    const auto fast = enumerate_partitions(n);
    ASSERT_EQ(fast.size(), oracle::bell_number(n));
    std::vector<oracle::Blocks> got;
    for (const auto& p : fast) got.push_back(p.blocks());
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::partitions_by_insertion(n));
    EXPECT_TRUE(std::is_sorted(fast.begin(), fast.end()));
    EXPECT_EQ(fast.front(), Partition::coarsest(n));
    EXPECT_EQ(fast.back(), Partition::finest(n));
  }
}

TEST(Refines, Examples) {
  const auto t = three_path();
  EXPECT_TRUE(refines(Partition::finest(3), part(t, "a,c|b")));
  EXPECT_FALSE(refines(part(t, "a|b,c"), part(t, "a,b|c")));
  EXPECT_FALSE(refines(part(t, "a,b|c"), part(t, "a|b,c")));
  EXPECT_TRUE(refines(part(t, "a|b,c"), part(t, "a|b,c")));
  expect_error(ErrorCode::SpaceMismatch, [] { refines(Partition::finest(2), Partition::finest(3)); });
}

TEST(Refines, IsAPartialOrderMatchingBothTests) {
  for (int n = 1; n <= 5; ++n) {
    const auto all = enumerate_partitions(n);
    for (const auto& x : all) {
      for (const auto& y : all) {
        const bool r = refines(x, y);
        ASSERT_EQ(r, oracle::refines_by_search(x.blocks(), y.blocks()));
        // E_x ⊇ E_y.
        const auto ex = sublattice(x);
        bool superset = true;
        for (Event e : sublattice(y).events) superset = superset && ex.contains(e);
        ASSERT_EQ(r, superset);
        if (r && refines(y, x)) {
          ASSERT_EQ(x, y);
        }
      }
    }
  }
}

TEST(Sublattice, Examples) {
  const auto t = three_path();
  EXPECT_EQ(sublattice(part(t, "a|b,c")).events,
            (std::vector<Event>{Event{}, ev(t, {"a"}), ev(t, {"b", "c"}), t.omega()}));
  EXPECT_EQ(sublattice(Partition::coarsest(3)).events, (std::vector<Event>{Event{}, t.omega()}));
  EXPECT_EQ(sublattice(Partition::finest(3)).size(), 8u);
}

TEST(Sublattice, BooleanAndSizedByBlocks) {
  for (const auto& p : enumerate_partitions(5)) {
    const auto s = sublattice(p);
    ASSERT_EQ(s.size(), std::size_t{1} << p.size());
    EXPECT_EQ(s.events, oracle::unions_by_closure(p.blocks()));
    for (Event a : s.events) {
      EXPECT_TRUE(s.contains(a.complement(5)));
      for (Event b : s.events) EXPECT_TRUE(s.contains(a | b));
    }
  }
}

TEST(CoarseGrain, Examples) {
  const auto t = three_path();
  const auto cg = coarse_grain(t, part(t, "a|b,c"));
  EXPECT_EQ(cg.mu(Event{}), 0);
  EXPECT_EQ(cg.mu(ev(t, {"a"})), 1);
  EXPECT_EQ(cg.mu(ev(t, {"b", "c"})), 0);
  EXPECT_EQ(cg.mu(t.omega()), 1);
  expect_error(ErrorCode::ForeignEvent, [&] { cg.mu(ev(t, {"b"})); });
  EXPECT_TRUE(cg.kolmogorov_holds());
  const auto trivial = coarse_grain(t, Partition::coarsest(3));
  EXPECT_EQ(trivial.mu(t.omega()), 1);
  const auto c = coin();
  for (const auto& p : enumerate_partitions(4)) EXPECT_TRUE(coarse_grain(c, p).kolmogorov_holds());
}

TEST(Decoherence, Examples) {
  const auto t = three_path();
  EXPECT_TRUE(is_decoherent(t, part(t, "a|b,c")));
  EXPECT_FALSE(is_decoherent(t, part(t, "a,b|c")));
  EXPECT_TRUE(is_decoherent(t, Partition::coarsest(3)));
  expect_error(ErrorCode::SpaceMismatch, [&] { is_decoherent(t, Partition::finest(2)); });
}

TEST(Separability, Examples) {
  const auto t = three_path();
  // Z = {a,c} meets block {a} in {a}, and μ({a}) = 1.
  EXPECT_FALSE(is_preclusively_separable(t, part(t, "a|b,c")));
  EXPECT_FALSE(is_preclusively_separable(t, part(t, "a,c|b")));
  EXPECT_TRUE(is_preclusively_separable(t, Partition::coarsest(3)));
  const auto c = coin();
  for (const auto& p : enumerate_partitions(4)) EXPECT_TRUE(is_preclusively_separable(c, p));
}

TEST(BuildPoset, Examples) {
  const auto c = coin();
  const auto bc = build_poset(c);
  EXPECT_EQ(bc.size(), 15u);
  EXPECT_EQ(sub_poset(bc, PosetTagName::D).size(), 15u);
  EXPECT_EQ(sub_poset(bc, PosetTagName::PD).size(), 15u);

  const auto t = three_path();
  const auto bt = build_poset(t);
  EXPECT_EQ(sub_poset(bt, PosetTagName::D).members, indices(bt, t, {"a,b,c", "a|b,c", "a,c|b"}));
  EXPECT_EQ(sub_poset(bt, PosetTagName::P).members, indices(bt, t, {"a,b,c"}));
  EXPECT_EQ(sub_poset(bt, PosetTagName::PD).members, indices(bt, t, {"a,b,c"}));

  EXPECT_EQ(build_poset(single()).size(), 1u);
  EXPECT_TRUE(sub_poset(bt, PosetTagName::O).members.empty());
}

TEST(Designate, UpperSetValidation) {
  const auto t = three_path();
  auto poset = build_poset(t);
  const std::size_t mid = poset.require_index(part(t, "a|b,c"));
  std::vector<std::size_t> up;
  for (std::size_t j = 0; j < poset.size(); ++j)
    if (poset.leq(mid, j)) up.push_back(j);
  EXPECT_EQ(designate_upper(poset, up, PosetTagName::O).members, up);
  EXPECT_TRUE(poset.has_designation(PosetTagName::O));
  EXPECT_EQ(sub_poset(poset, PosetTagName::O).members, up);

  const std::size_t finest = poset.require_index(Partition::finest(3));
  expect_error(ErrorCode::NotAnUpperSet, [&] { designate_upper(poset, {finest}, PosetTagName::E); });
  const auto w = upper_set_witness(poset, {finest});
  ASSERT_TRUE(w);
  EXPECT_EQ(w->first, finest);

  EXPECT_TRUE(designate_upper(poset, {}, PosetTagName::E).members.empty());
  expect_error(ErrorCode::Schema, [&] { designate_upper(poset, {}, PosetTagName::D); });
}

TEST(Dot, HasseEdgesOnly) {
  const auto t = three_path();
  const auto poset = build_poset(t);
  const auto dot = poset_dot(t.space(), poset);
  // Π3: the finest partition is covered by the three two-block partitions,
  // each covered by Ω.
  EXPECT_EQ(hasse_edges(poset, [&] {
              std::vector<std::size_t> all(poset.size());
              std::iota(all.begin(), all.end(), 0);
              return all;
            }()).size(),
            6u);
  EXPECT_NE(dot.find("fillcolor=palegreen"), std::string::npos);
  EXPECT_NE(dot.find("\"a|b,c\", fillcolor=lightblue"), std::string::npos);
}

// Properties over seeded suites.

TEST(GrainingProperties, PairwiseEqualsFullAdditivity) {
  for (const auto& t : quantum_suite(80, 5)) {
    const auto nulls = oracle::null_table(t.mu_table(), t.field());
    for (const auto& p : enumerate_partitions(t.size())) {
      ASSERT_EQ(is_decoherent(t, p),
                oracle::decoherent_all_pairs(t.mu_table(), t.field(), p.blocks()));
      ASSERT_EQ(is_preclusively_separable(t, p), oracle::separable_naive(nulls, p.blocks()));
    }
  }
}

TEST(GrainingProperties, TagsAreUpperSets) {
  for (const auto& t : quantum_suite(50, 5)) {
    const auto poset = build_poset(t);
    for (auto tag : {PosetTagName::D, PosetTagName::P, PosetTagName::PD}) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < poset.size(); ++i) {
        const bool d = is_decoherent(t, poset.at(i));
        const bool p = is_preclusively_separable(t, poset.at(i));
        if (tag == PosetTagName::D ? d : tag == PosetTagName::P ? p : d && p) members.push_back(i);
      }
      EXPECT_FALSE(upper_set_witness(poset, members));
      EXPECT_EQ(sub_poset(poset, tag).members, members);
    }
    EXPECT_TRUE(sub_poset(poset, PosetTagName::D).contains(0));
  }
}

}  // namespace
}  // namespace qmt::test
