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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmt/grainings.hpp"
#include "qmt/poset.hpp"
#include "qmt/topos.hpp"
#include "qmt/valuations.hpp"

namespace qmt {

/// A tagged sub-poset of B re-indexed 0..k-1 as a FinitePoset. Local index i
/// is the i-th member of the tag.
class PosetView {
 public:
  PosetView(const GrainingPoset& graining, PosetTag tag)
      : universe_(graining.universe()), tag_(std::move(tag)) {
    for (auto i : tag_.members) partitions_.push_back(graining.at(i));
    order_ = FinitePoset::from_relation(partitions_.size(), [&](std::size_t a, std::size_t b) {
      return refines(partitions_[a], partitions_[b]);
    });
  }

  int universe() const { return universe_; }
  PosetTagName name() const { return tag_.name; }
  const PosetTag& tag() const { return tag_; }
  const FinitePoset& order() const { return order_; }
  std::size_t size() const { return partitions_.size(); }
  const Partition& partition(std::size_t local) const { return partitions_.at(local); }
  const std::vector<Partition>& partitions() const { return partitions_; }

  std::optional<std::size_t> local_index(const Partition& p) const {
    auto it = std::find(partitions_.begin(), partitions_.end(), p);
    if (it == partitions_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - partitions_.begin());
  }

 private:
  int universe_;
  PosetTag tag_;
  std::vector<Partition> partitions_;
  FinitePoset order_;
};

inline PosetView make_view(const GrainingPoset& graining, PosetTagName name) {
  return PosetView(graining, sub_poset(graining, name));
}

// ---------------------------------------------------------------------------
// Event construction: ΔE_A, the accessible subobject S_D and G⟨A⟩.

/// ΔE_A over the view: every stage is the whole event algebra, ascending.
inline std::shared_ptr<const VaryingSet<Event>> event_varying_set(const PosetView& view) {
  std::vector<Event> all;
  for (Event::mask_type m = 0; m <= Event::full(view.universe()).bits(); ++m)
    all.push_back(Event(m));
  return std::make_shared<const VaryingSet<Event>>(constant_varying_set(view.order(), all));
}

/// S_D(Λ) = { A : A ∈ E_Π for some Π in the view refining Λ }.
inline Subobject<Event> accessible_subobject(const PosetView& view,
                                             std::shared_ptr<const VaryingSet<Event>> events) {
  std::vector<ElementSet> stages;
  for (std::size_t p = 0; p < view.size(); ++p) {
    ElementSet s(events->stage(p).size());
    for (std::size_t pi = 0; pi < view.size(); ++pi) {
      if (!view.order().leq(pi, p)) continue;
      for (Event e : view.partition(pi).events()) s.set(e.bits());
    }
    stages.push_back(std::move(s));
  }
  return Subobject<Event>(std::move(events), std::move(stages));
}

/// G⟨A⟩ as the upper set { Λ : A ∈ S_D(Λ) }.
inline GlobalElement global_element_event(const Subobject<Event>& accessible, Event a) {
  const auto& poset = accessible.parent().poset();
  GlobalElement g{poset.empty_set()};
  for (std::size_t p = 0; p < poset.size(); ++p)
    if (accessible.contains(p, a.bits())) g.members.set(p);
  if (g.members.none())
    throw Error(ErrorCode::NotAccessibleAnywhere,
                "event mask " + std::to_string(a.bits()) + " lies in no member of the poset");
  if (!is_natural_family(poset, g))
    throw Error(ErrorCode::InternalInvariant, "G<A> is not a natural family");
  return g;
}

/// H⟨E_A⟩: the algebra generated by G⟨A⟩ over every event lying in
/// some member of the poset.
struct EventAlgebra {
  std::vector<Event> events;             // accessible somewhere, ascending
  std::vector<GlobalElement> elements;   // G⟨A⟩ per event
  GeneratedAlgebra algebra;
};

inline EventAlgebra event_algebra(const PosetView& view) {
  auto f = event_varying_set(view);
  const Subobject<Event> s = accessible_subobject(view, f);
  std::vector<Event> events;
  std::vector<GlobalElement> elements;
  std::vector<ElementSet> generators;
  for (Event::mask_type m = 0; m <= Event::full(view.universe()).bits(); ++m) {
    bool somewhere = false;
    for (std::size_t p = 0; p < view.size() && !somewhere; ++p) somewhere = s.contains(p, m);
    if (!somewhere) continue;
    events.push_back(Event(m));
    elements.push_back(global_element_event(s, Event(m)));
    generators.push_back(elements.back().members);
  }
  return {std::move(events), std::move(elements), generate_algebra(generators, view.order())};
}

// ---------------------------------------------------------------------------
// Valuation construction: 𝕍, 𝕊, χ^𝕊, G⟨φ⟩ and H⟨V⟩.

/// 𝕍: stage Λ is homs(Λ); transitions restrict to the coarser partition.
inline std::shared_ptr<const VaryingSet<HomValuation>> valuation_varying_set(
    const PosetView& view) {
  std::vector<std::vector<HomValuation>> stages;
  for (std::size_t p = 0; p < view.size(); ++p) stages.push_back(homs(view.partition(p)));
  return std::make_shared<const VaryingSet<HomValuation>>(
      view.order(), std::move(stages), [&view](std::size_t, std::size_t q, const HomValuation& phi) {
        return restrict_hom(phi, view.partition(q));
      });
}

struct ValuationSubobject {
  Subobject<HomValuation> subobject;
  /// 𝕊 equals 𝕍 at every stage.
  bool degenerate;
};

/// 𝕊(Λ) = { φ_Π|_Λ : Π ∈ Q, Π refines Λ }. With no generator set, Q is
/// the view itself, and reflexivity of refinement makes 𝕊 = 𝕍.
inline ValuationSubobject valuation_subobject(
    const PosetView& view, std::shared_ptr<const VaryingSet<HomValuation>> valuations,
    const std::optional<std::vector<Partition>>& generators = std::nullopt) {
  const std::vector<Partition>& q = generators ? *generators : view.partitions();
  std::vector<ElementSet> stages;
  for (std::size_t p = 0; p < view.size(); ++p) {
    const Partition& lambda = view.partition(p);
    const auto& stage = valuations->stage(p);
    ElementSet s(stage.size());
    for (const Partition& pi : q) {
      if (pi.universe() != lambda.universe() || !refines(pi, lambda)) continue;
      for (const auto& phi : homs(pi)) {
        const HomValuation r = restrict_hom(phi, lambda);
        s.set(static_cast<std::size_t>(std::find(stage.begin(), stage.end(), r) - stage.begin()));
      }
    }
    stages.push_back(std::move(s));
  }
  Subobject<HomValuation> sub(std::move(valuations), std::move(stages));
  const bool degenerate = sub.is_whole();
  return {std::move(sub), degenerate};
}

/// G⟨φ⟩ as U_φ = { Λ ≥ home : φ|_Λ ∈ 𝕊(Λ) }, the characteristic value at
/// the home stage read as an upper set of the whole poset.
inline GlobalElement global_element_valuation(const PosetView& view,
                                              const Subobject<HomValuation>& s,
                                              const HomValuation& phi) {
  const auto home = view.local_index(phi.partition());
  if (!home) throw Error(ErrorCode::HomeNotInPoset, "the valuation's partition is not in the poset");
  const auto& stage = s.parent().stage(*home);
  const auto x = static_cast<std::size_t>(std::find(stage.begin(), stage.end(), phi) - stage.begin());
  GlobalElement g{characteristic(s.parent(), s, *home, x).members};
  if (!is_natural_family(view.order(), g))
    throw Error(ErrorCode::InternalInvariant, "G<phi> is not a natural family");
  return g;
}

/// h: V → H⟨V⟩, φ ↦ G⟨φ⟩, together with the generated algebra and the
/// groups of valuations sent to the same element.
struct HMap {
  std::vector<HomValuation> valuations;  // pooled over the view, by stage
  std::vector<GlobalElement> images;
  std::vector<std::vector<std::size_t>> collisions;  // groups of size >= 2
  GeneratedAlgebra algebra;
  bool degenerate;
};

inline HMap h_map(const PosetView& view,
                  const std::optional<std::vector<Partition>>& generators = std::nullopt) {
  auto vv = valuation_varying_set(view);
  ValuationSubobject s = valuation_subobject(view, vv, generators);
  std::vector<HomValuation> valuations;
  std::vector<GlobalElement> images;
  std::vector<ElementSet> gens;
  for (std::size_t p = 0; p < view.size(); ++p)
    for (const auto& phi : vv->stage(p)) {
      valuations.push_back(phi);
      images.push_back(global_element_valuation(view, s.subobject, phi));
      gens.push_back(images.back().members);
    }
  std::map<ElementSet, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < images.size(); ++i) groups[images[i].members].push_back(i);
  std::vector<std::vector<std::size_t>> collisions;
  for (auto& [_, g] : groups)
    if (g.size() > 1) collisions.push_back(g);
  std::sort(collisions.begin(), collisions.end());
  return {std::move(valuations), std::move(images), std::move(collisions),
          generate_algebra(gens, view.order()), s.degenerate};
}

}  // namespace qmt
