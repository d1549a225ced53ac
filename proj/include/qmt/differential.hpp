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

#pragma once

// Fast path versus naive oracle, reported as a list of mismatches with a
// witness each. An empty report means the two routes agree.

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qmt/constructions.hpp"
#include "qmt/grainings.hpp"
#include "qmt/oracle.hpp"
#include "qmt/schemes.hpp"
#include "qmt/topos.hpp"

namespace qmt {

struct DiffReport {
  std::vector<std::string> mismatches;
  std::size_t comparisons = 0;

  bool empty() const { return mismatches.empty(); }
  void check(bool agree, const std::string& witness) {
    ++comparisons;
    if (!agree) mismatches.push_back(witness);
  }
  void merge(const DiffReport& other) {
    comparisons += other.comparisons;
    mismatches.insert(mismatches.end(), other.mismatches.begin(), other.mismatches.end());
  }
};

namespace detail {

inline std::string duals_string(const SampleSpace& space, const std::vector<Event>& duals) {
  std::string out = "[";
  for (std::size_t i = 0; i < duals.size(); ++i) out += (i ? " " : "") + space.format(duals[i]);
  return out + "]";
}

inline std::vector<Event> duals_of(const SchemeResult& r) {
  std::vector<Event> out;
  for (const auto& c : r.coevents) out.push_back(c.dual());
  return out;
}

}  // namespace detail

/// μ table against the double sum, and partition enumeration against
/// insertion.
template <class Field>
DiffReport diff_measure(const HistoriesTheory<Field>& theory) {
  DiffReport r;
  const auto& space = theory.space();
  for (Event::mask_type m = 0; m <= theory.omega().bits(); ++m) {
    const Event a(m);
    r.check(theory.field().equal(theory.mu(a), oracle::mu_double_sum(theory.matrix(), a)),
            "mu" + space.format(a));
  }
  const auto fast = enumerate_partitions(theory.size());
  const auto slow = oracle::partitions_by_insertion(theory.size());
  std::vector<oracle::Blocks> fast_blocks;
  for (const auto& p : fast) fast_blocks.push_back(p.blocks());
  std::sort(fast_blocks.begin(), fast_blocks.end());
  r.check(fast.size() == oracle::bell_number(theory.size()), "partition count");
  r.check(fast_blocks == slow, "partition lists differ");
  return r;
}

/// Per-partition decoherence and separability, pairwise-block test against
/// all disjoint pairs of E_Λ.
template <class Field>
DiffReport diff_decoherence(const HistoriesTheory<Field>& theory, const GrainingPoset& poset) {
  DiffReport r;
  const auto nulls = oracle::null_table(theory.mu_table(), theory.field());
  for (std::size_t i = 0; i < poset.size(); ++i) {
    const auto& p = poset.at(i);
    const std::string name = format_partition(theory.space(), p);
    r.check(poset.has(i, GrainingPoset::kDecoherent) ==
                oracle::decoherent_all_pairs(theory.mu_table(), theory.field(), p.blocks()),
            "decoherence of " + name);
    r.check(poset.has(i, GrainingPoset::kSeparable) == oracle::separable_naive(nulls, p.blocks()),
            "separability of " + name);
    for (std::size_t j = 0; j < poset.size(); ++j)
      r.check(poset.leq(i, j) == oracle::refines_by_search(p.blocks(), poset.at(j).blocks()),
              "order " + name + " <= " + format_partition(theory.space(), poset.at(j)));
  }
  return r;
}

/// Every scheme in every mode against raw predicate filtering on tables.
template <class Field>
DiffReport diff_schemes(const HistoriesTheory<Field>& theory, const GrainingPoset& poset) {
  DiffReport r;
  const int n = theory.size();
  const auto& space = theory.space();
  const auto nulls = oracle::null_table(theory.mu_table(), theory.field());

  std::vector<oracle::Blocks> decoherent;
  for (const auto& blocks : oracle::partitions_by_insertion(n))
    if (oracle::decoherent_all_pairs(theory.mu_table(), theory.field(), blocks))
      decoherent.push_back(blocks);

  const auto candidates = oracle::preclusive_multiplicative_duals(n, nulls);
  auto compare = [&](const SchemeResult& fast, const std::vector<Event>& slow, const std::string& label) {
    const auto got = detail::duals_of(fast);
    r.check(got == slow, label + ": fast " + detail::duals_string(space, got) + " oracle " +
                             detail::duals_string(space, slow));
  };
  compare(multiplicative_scheme(theory, Minimality::Primitive),
          oracle::minimal_duals(n, candidates, true), "M primitive");
  compare(multiplicative_scheme(theory, Minimality::Literal),
          oracle::minimal_duals(n, candidates, false), "M literal");

  std::vector<Event> pc;
  for (Event a : candidates) {
    const auto t = oracle::star_table(n, a);
    bool all = true;
    for (const auto& blocks : decoherent) all = all && oracle::classical_by_count(t, blocks);
    if (all) pc.push_back(a);
  }
  {
    std::vector<Event> fast;
    for (const auto& c : m_pc(theory, poset)) fast.push_back(c.dual());
    r.check(fast == pc, "M_PC: fast " + detail::duals_string(space, fast) + " oracle " +
                            detail::duals_string(space, pc));
  }
  compare(cons_m(theory, poset, Minimality::Primitive), oracle::minimal_duals(n, pc, true),
          "Cons_M primitive");
  compare(cons_m(theory, poset, Minimality::Literal), oracle::minimal_duals(n, pc, false),
          "Cons_M literal");
  for (bool literal : {true, false}) {
    const Reading reading = literal ? Reading::Literal : Reading::Loose;
    compare(cons_d(theory, poset, reading),
            oracle::consistent_duals(n, decoherent, nulls, literal, false),
            "Cons_D " + to_string(reading));
    compare(cons_c(theory, poset, reading),
            oracle::consistent_duals(n, decoherent, nulls, literal, true),
            "Cons_C " + to_string(reading));
  }
  return r;
}

namespace detail {

inline std::vector<bool> to_bools(const ElementSet& s) {
  std::vector<bool> out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) out[i] = s.test(i);
  return out;
}

}  // namespace detail

/// Ambient Heyting implication against greatest-element search over all
/// upper sets found by subset filtering. Skips posets above `max_size`.
inline DiffReport diff_heyting(const FinitePoset& poset, std::size_t max_size = 12) {
  DiffReport r;
  if (poset.size() > max_size) return r;
  const auto uppers = oracle::upper_sets_by_filter(
      poset.size(), [&](std::size_t i, std::size_t j) { return poset.leq(i, j); });
  const auto fast_uppers = poset.upper_sets();
  std::vector<std::vector<bool>> fast_bools;
  for (const auto& u : fast_uppers) fast_bools.push_back(detail::to_bools(u));
  std::sort(fast_bools.begin(), fast_bools.end());
  auto sorted = uppers;
  std::sort(sorted.begin(), sorted.end());
  r.check(fast_bools == sorted, "upper set enumeration");
  const UpperSetAlgebra h(poset);
  for (const auto& a : fast_uppers)
    for (const auto& b : fast_uppers) {
      const auto slow = oracle::implies_by_search(uppers, detail::to_bools(a), detail::to_bools(b));
      r.check(detail::to_bools(h.implies(a, b)) == slow, "ambient implication");
    }
  return r;
}

/// Default carrier bound for the quadratic greatest-element search.
inline constexpr std::size_t kOracleCarrierLimit = 64;

/// Carrier relative pseudocomplement against greatest-element search.
/// Carriers larger than `max_carrier` are skipped.
inline DiffReport diff_generated(const GeneratedAlgebra& g,
                                 std::size_t max_carrier = kOracleCarrierLimit) {
  DiffReport r;
  if (g.size() > max_carrier) return r;
  std::vector<std::vector<bool>> carrier;
  for (const auto& c : g.carrier()) carrier.push_back(detail::to_bools(c));
  for (const auto& a : g.carrier())
    for (const auto& b : g.carrier())
      r.check(detail::to_bools(g.implies(a, b)) ==
                  oracle::implies_by_search(carrier, detail::to_bools(a), detail::to_bools(b)),
              "generated-algebra implication");
  return r;
}

/// 𝕊 stages, the degeneracy flag and G⟨φ⟩ recomputed from the set-level
/// definitions with block-containment refinement.
inline DiffReport diff_topos(const PosetView& view,
                             const std::optional<std::vector<Partition>>& generators) {
  DiffReport r;
  const HMap fast = h_map(view, generators);
  const std::vector<Partition>& q = generators ? *generators : view.partitions();

  // stage(Λ) as a set of (Λ, block-of-Λ) pairs.
  auto stage_naive = [&](const Partition& lambda) {
    std::set<Event> blocks;
    for (const Partition& pi : q) {
      if (pi.universe() != lambda.universe() ||
          !oracle::refines_by_search(pi.blocks(), lambda.blocks()))
        continue;
      for (Event b : pi.blocks())
        for (Event c : lambda.blocks())
          if (b.subset_of(c)) blocks.insert(c);
    }
    return blocks;
  };

  bool degenerate = true;
  for (std::size_t p = 0; p < view.size(); ++p)
    degenerate = degenerate && stage_naive(view.partition(p)).size() ==
                                   static_cast<std::size_t>(view.partition(p).size());
  r.check(degenerate == fast.degenerate, "degeneracy flag");

  for (std::size_t i = 0; i < fast.valuations.size(); ++i) {
    const auto& phi = fast.valuations[i];
    ElementSet u(view.size());
    for (std::size_t p = 0; p < view.size(); ++p) {
      const Partition& lambda = view.partition(p);
      if (!oracle::refines_by_search(phi.partition().blocks(), lambda.blocks())) continue;
      Event image;
      for (Event c : lambda.blocks())
        if (phi.block().subset_of(c)) image = c;
      if (stage_naive(lambda).count(image)) u.set(p);
    }
    r.check(u == fast.images[i].members, "G<phi> for valuation " + std::to_string(i));
  }
  r.merge(diff_generated(fast.algebra));
  return r;
}

}  // namespace qmt
