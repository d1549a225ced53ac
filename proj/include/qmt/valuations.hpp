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

#include <algorithm>
#include <compare>
#include <string>
#include <utility>
#include <vector>

#include "qmt/coevent.hpp"
#include "qmt/error.hpp"
#include "qmt/grainings.hpp"
#include "qmt/partition.hpp"
#include "qmt/theory.hpp"

namespace qmt {

/// φ_Λ^A: the homomorphism E_Λ → Z2 sending the block A to 1. The finest
/// partition's valuations are the r* maps of classical probability.
class HomValuation {
 public:
  HomValuation(Partition partition, Event block)
      : partition_(std::move(partition)), block_(block) {
    if (!partition_.has_block(block))
      throw Error(ErrorCode::NotABlock, "the selected event is not a block of the partition");
  }

  const Partition& partition() const { return partition_; }
  Event block() const { return block_; }

  /// Defined only on E_Λ: propositions outside the consistent set have no
  /// truth value.
  bool eval(Event b) const {
    if (!partition_.generates(b))
      throw Error(ErrorCode::OutsideDomain,
                  "event mask " + std::to_string(b.bits()) + " is not a union of blocks");
    return block_.subset_of(b);
  }

  /// (B, φ(B)) for every B in E_Λ, ascending.
  std::vector<std::pair<Event, bool>> truth_table() const {
    std::vector<std::pair<Event, bool>> out;
    for (Event b : partition_.events()) out.emplace_back(b, block_.subset_of(b));
    return out;
  }

  std::vector<Event> support() const {
    std::vector<Event> out;
    for (Event b : partition_.events())
      if (block_.subset_of(b)) out.push_back(b);
    return out;
  }

  friend bool operator==(const HomValuation&, const HomValuation&) = default;
  friend std::strong_ordering operator<=>(const HomValuation& a, const HomValuation& b) {
    if (auto c = a.partition_ <=> b.partition_; c != 0) return c;
    return a.block_ <=> b.block_;
  }

 private:
  Partition partition_;
  Event block_;
};

/// One valuation per block, in block order.
inline std::vector<HomValuation> homs(const Partition& p) {
  std::vector<HomValuation> out;
  for (Event b : p.blocks()) out.emplace_back(p, b);
  return out;
}

inline bool eval_hom(const HomValuation& phi, Event b) { return phi.eval(b); }

/// φ_Λ^A avoids every null event of E_Λ.
template <class Field>
bool is_preclusive_hom(const HistoriesTheory<Field>& theory, const HomValuation& phi) {
  const Partition& p = phi.partition();
  require_space(theory, p);
  const auto count = Event::mask_type{1} << p.size();
  for (Event::mask_type s = 0; s < count; ++s) {
    const Event u = p.union_of(s);
    if (phi.block().subset_of(u) && theory.is_null(u)) return false;
  }
  return true;
}

/// Cl(E_Λ): the preclusive members of homs(Λ).
template <class Field>
std::vector<HomValuation> cl(const HistoriesTheory<Field>& theory, const Partition& p) {
  require_space(theory, p);
  std::vector<HomValuation> out;
  for (auto& phi : homs(p))
    if (is_preclusive_hom(theory, phi)) out.push_back(std::move(phi));
  return out;
}

/// φ_Λ restricted to E_Π for a coarsening Π of Λ: the block of Π containing
/// φ's block is the one sent to 1.
inline HomValuation restrict_hom(const HomValuation& phi, const Partition& coarser) {
  require_same_space(phi.partition(), coarser);
  if (!refines(phi.partition(), coarser))
    throw Error(ErrorCode::NotComparable, "restriction target is not a coarsening");
  return HomValuation(coarser, coarser.block_containing(phi.block()));
}

enum class ValuationKind { VD, VC, VPD, VPDPreclusive };

inline std::string to_string(ValuationKind k) {
  switch (k) {
    case ValuationKind::VD: return "V_D";
    case ValuationKind::VC: return "V_C";
    case ValuationKind::VPD: return "V_PD";
    case ValuationKind::VPDPreclusive: return "V_PD-preclusive";
  }
  return "?";
}

/// A pooled set of valuations; each member carries its home partition.
struct ValuationSet {
  ValuationKind kind;
  std::vector<HomValuation> members;
};

template <class Field>
ValuationSet pooled(const HistoriesTheory<Field>& theory, const GrainingPoset& poset,
                    ValuationKind kind) {
  const bool pd = kind == ValuationKind::VPD || kind == ValuationKind::VPDPreclusive;
  const bool preclusive = kind == ValuationKind::VC || kind == ValuationKind::VPDPreclusive;
  const PosetTag tag = sub_poset(poset, pd ? PosetTagName::PD : PosetTagName::D);
  ValuationSet out{kind, {}};
  for (auto i : tag.members) {
    auto vs = preclusive ? cl(theory, poset.at(i)) : homs(poset.at(i));
    for (auto& v : vs) out.members.push_back(std::move(v));
  }
  return out;
}

/// (𝒟, 𝒱, 𝒯) with 𝒯 = Z2 fixed.
struct LogicalFramework {
  std::vector<Sublattice> domains;
  ValuationSet valuations;
  static constexpr std::string_view truth_values = "Z2";
};

/// (B_D, V_D, Z2), (B_D, V_C, Z2), (B_PD, V_PD, Z2) and its preclusive variant.
template <class Field>
LogicalFramework logical_framework(const HistoriesTheory<Field>& theory,
                                   const GrainingPoset& poset, ValuationKind kind) {
  const bool pd = kind == ValuationKind::VPD || kind == ValuationKind::VPDPreclusive;
  LogicalFramework fw{{}, pooled(theory, poset, kind)};
  for (auto i : sub_poset(poset, pd ? PosetTagName::PD : PosetTagName::D).members)
    fw.domains.push_back(sublattice(poset.at(i)));
  for (const auto& v : fw.valuations.members) {
    const bool home = std::any_of(fw.domains.begin(), fw.domains.end(),
                                  [&](const Sublattice& s) { return s.source == v.partition(); });
    if (!home)
      throw Error(ErrorCode::InternalInvariant, "valuation whose partition is not a domain");
  }
  return fw;
}

/// supp(φ_Λ^A) = supp(A*) ∩ E_Λ, and φ_Λ^A agrees with A* on all of E_Λ.
inline bool support_relation_check(const HomValuation& phi) {
  const Partition& p = phi.partition();
  const MultiplicativeCoevent star(p.universe(), phi.block());
  std::vector<Event> expected;
  for (Event b : star.to_coevent().support_events())
    if (p.generates(b)) expected.push_back(b);
  if (expected != phi.support()) return false;
  for (const auto& [b, v] : phi.truth_table())
    if (v != star.eval(b)) return false;
  return true;
}

}  // namespace qmt
