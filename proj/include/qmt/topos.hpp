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
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "qmt/error.hpp"
#include "qmt/poset.hpp"

namespace qmt {

/// A sieve at p: an upward-closed subset of ↑p. Sieves at p form the
/// stage Ω(p) of the subobject classifier.
struct Sieve {
  std::size_t at = 0;
  ElementSet members;

  friend bool operator==(const Sieve&, const Sieve&) = default;
};

inline bool is_sieve(const FinitePoset& poset, const Sieve& s) {
  return s.members.size() == poset.size() && s.members.is_subset_of(poset.up(s.at)) &&
         poset.is_upper(s.members);
}

/// Ω(p): all sieves at p, ascending by member set.
inline std::vector<Sieve> sieves_at(const FinitePoset& poset, std::size_t p) {
  poset.require_element(p);
  std::vector<Sieve> out;
  for (auto& s : poset.upper_sets_within(poset.up(p))) out.push_back({p, std::move(s)});
  return out;
}

/// The classifier's transition Ω(p) → Ω(q) for p ≤ q: S ↦ S ∩ ↑q.
inline Sieve restrict_sieve(const FinitePoset& poset, const Sieve& s, std::size_t q) {
  if (!poset.leq(s.at, q))
    throw Error(ErrorCode::ForeignElement, "sieve restriction needs p <= q");
  return {q, s.members & poset.up(q)};
}

/// A covariant functor from a finite poset to finite sets. Stage elements
/// are values of T; transitions are stored as index maps for every p ≤ q.
template <class T>
class VaryingSet {
 public:
  using Transition = std::function<T(std::size_t, std::size_t, const T&)>;

  VaryingSet(FinitePoset poset, std::vector<std::vector<T>> stages, const Transition& transition)
      : poset_(std::move(poset)), stages_(std::move(stages)) {
    const std::size_t k = poset_.size();
    if (stages_.size() != k)
      throw Error(ErrorCode::DimensionMismatch, "one stage per poset element is required");
    maps_.resize(k * k);
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t q = 0; q < k; ++q) {
        if (!poset_.leq(p, q)) continue;
        auto& map = maps_[p * k + q];
        for (const T& x : stages_[p]) {
          const T y = transition(p, q, x);
          const auto& target = stages_[q];
          auto it = std::find(target.begin(), target.end(), y);
          if (it == target.end())
            throw Error(ErrorCode::InternalInvariant,
                        "transition leaves the target stage at " + std::to_string(p) + " <= " +
                            std::to_string(q));
          map.push_back(static_cast<std::size_t>(it - target.begin()));
        }
      }
  }

  const FinitePoset& poset() const { return poset_; }
  const std::vector<T>& stage(std::size_t p) const { return stages_.at(p); }

  /// Index in stage(q) of the image of stage(p)[x].
  std::size_t transition(std::size_t p, std::size_t q, std::size_t x) const {
    if (!poset_.leq(p, q)) throw Error(ErrorCode::ForeignElement, "transition needs p <= q");
    return maps_[p * poset_.size() + q].at(x);
  }

  /// Identity and composition laws, checked over all comparable pairs and
  /// triples. Returns a description of the first violation.
  std::optional<std::string> functor_law_violation() const {
    const std::size_t k = poset_.size();
    for (std::size_t p = 0; p < k; ++p) {
      for (std::size_t x = 0; x < stages_[p].size(); ++x)
        if (transition(p, p, x) != x) return "identity fails at " + std::to_string(p);
      for (std::size_t q = 0; q < k; ++q) {
        if (!poset_.leq(p, q)) continue;
        for (std::size_t r = 0; r < k; ++r) {
          if (!poset_.leq(q, r)) continue;
          for (std::size_t x = 0; x < stages_[p].size(); ++x)
            if (transition(q, r, transition(p, q, x)) != transition(p, r, x))
              return "composition fails at " + std::to_string(p) + " <= " + std::to_string(q) +
                     " <= " + std::to_string(r);
        }
      }
    }
    return std::nullopt;
  }

 private:
  FinitePoset poset_;
  std::vector<std::vector<T>> stages_;
  std::vector<std::vector<std::size_t>> maps_;
};

/// ΔX: X at every stage, identity transitions.
template <class T>
VaryingSet<T> constant_varying_set(const FinitePoset& poset, const std::vector<T>& x) {
  return VaryingSet<T>(poset, std::vector<std::vector<T>>(poset.size(), x),
                       [](std::size_t, std::size_t, const T& v) { return v; });
}

/// A subobject of a varying set: a subset of each stage, mapped into itself
/// by every transition.
template <class T>
class Subobject {
 public:
  Subobject(std::shared_ptr<const VaryingSet<T>> parent, std::vector<ElementSet> stages)
      : parent_(std::move(parent)), stages_(std::move(stages)) {
    const auto& poset = parent_->poset();
    if (stages_.size() != poset.size())
      throw Error(ErrorCode::NotASubobject, "one stage subset per element is required");
    for (std::size_t p = 0; p < poset.size(); ++p)
      if (stages_[p].size() != parent_->stage(p).size())
        throw Error(ErrorCode::NotASubobject, "stage subset has the wrong width");
    if (auto v = square_violation())
      throw Error(ErrorCode::NotASubobject, *v);
  }

  const VaryingSet<T>& parent() const { return *parent_; }
  const std::shared_ptr<const VaryingSet<T>>& parent_ptr() const { return parent_; }
  const ElementSet& stage(std::size_t p) const { return stages_.at(p); }
  bool contains(std::size_t p, std::size_t x) const { return stages_.at(p).test(x); }

  std::vector<T> elements(std::size_t p) const {
    std::vector<T> out;
    const auto& s = stages_.at(p);
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
      out.push_back(parent_->stage(p)[i]);
    return out;
  }

  /// True when every stage is the whole parent stage.
  bool is_whole() const {
    return std::all_of(stages_.begin(), stages_.end(),
                       [](const ElementSet& s) { return s.all(); });
  }

  /// The commuting-square condition: S(p) maps into S(q) for p ≤ q.
  std::optional<std::string> square_violation() const {
    const auto& poset = parent_->poset();
    for (std::size_t p = 0; p < poset.size(); ++p)
      for (std::size_t q = 0; q < poset.size(); ++q) {
        if (!poset.leq(p, q)) continue;
        const auto& s = stages_[p];
        for (auto x = s.find_first(); x != ElementSet::npos; x = s.find_next(x))
          if (!stages_[q].test(parent_->transition(p, q, x)))
            return "square fails at " + std::to_string(p) + " <= " + std::to_string(q);
      }
    return std::nullopt;
  }

 private:
  std::shared_ptr<const VaryingSet<T>> parent_;
  std::vector<ElementSet> stages_;
};

/// χ_p(x) = { q ≥ p : x|_q ∈ S(q) }.
template <class T>
Sieve characteristic(const VaryingSet<T>& f, const Subobject<T>& s, std::size_t p, std::size_t x) {
  if (&s.parent() != &f) throw Error(ErrorCode::NotASubobject, "subobject of a different functor");
  const auto& poset = f.poset();
  poset.require_element(p);
  Sieve out{p, poset.empty_set()};
  const auto& up = poset.up(p);
  for (auto q = up.find_first(); q != ElementSet::npos; q = up.find_next(q))
    if (s.contains(q, f.transition(p, q, x))) out.members.set(q);
  if (!is_sieve(poset, out))
    throw Error(ErrorCode::InternalInvariant, "characteristic value is not a sieve");
  return out;
}

/// Naturality of χ: χ_q(x|_q) = χ_p(x) ∩ ↑q for p ≤ q.
template <class T>
std::optional<std::string> characteristic_naturality_violation(const VaryingSet<T>& f,
                                                               const Subobject<T>& s) {
  const auto& poset = f.poset();
  for (std::size_t p = 0; p < poset.size(); ++p)
    for (std::size_t x = 0; x < f.stage(p).size(); ++x) {
      const Sieve at_p = characteristic(f, s, p, x);
      for (std::size_t q = 0; q < poset.size(); ++q) {
        if (!poset.leq(p, q)) continue;
        if (characteristic(f, s, q, f.transition(p, q, x)) != restrict_sieve(poset, at_p, q))
          return "naturality fails at " + std::to_string(p) + " <= " + std::to_string(q);
      }
    }
  return std::nullopt;
}

/// A global element 1 → Ω, represented by an upper set U of the poset;
/// its component at p is the sieve U ∩ ↑p.
struct GlobalElement {
  ElementSet members;

  Sieve at(const FinitePoset& poset, std::size_t p) const { return {p, members & poset.up(p)}; }
  friend bool operator==(const GlobalElement&, const GlobalElement&) = default;
};

/// The family p ↦ U ∩ ↑p is compatible: U ∩ ↑p ∩ ↑q = U ∩ ↑q for p ≤ q.
inline bool is_natural_family(const FinitePoset& poset, const GlobalElement& g) {
  if (!poset.is_upper(g.members)) return false;
  for (std::size_t p = 0; p < poset.size(); ++p)
    for (std::size_t q = 0; q < poset.size(); ++q)
      if (poset.leq(p, q) && restrict_sieve(poset, g.at(poset, p), q) != g.at(poset, q))
        return false;
  return true;
}

/// The Heyting algebra of all upper sets of a poset (the global elements
/// of Ω): meet ∩, join ∪, U ⇒ V = { p : ↑p ∩ U ⊆ V }.
class UpperSetAlgebra {
 public:
  explicit UpperSetAlgebra(FinitePoset poset) : poset_(std::move(poset)) {}

  const FinitePoset& poset() const { return poset_; }
  ElementSet top() const { return poset_.full_set(); }
  ElementSet bottom() const { return poset_.empty_set(); }
  ElementSet meet(const ElementSet& a, const ElementSet& b) const { return a & b; }
  ElementSet join(const ElementSet& a, const ElementSet& b) const { return a | b; }
  bool leq(const ElementSet& a, const ElementSet& b) const { return a.is_subset_of(b); }

  ElementSet implies(const ElementSet& a, const ElementSet& b) const {
    ElementSet out = poset_.empty_set();
    for (std::size_t p = 0; p < poset_.size(); ++p)
      if ((poset_.up(p) & a).is_subset_of(b)) out.set(p);
    return out;
  }
  ElementSet negate(const ElementSet& a) const { return implies(a, bottom()); }

  std::vector<ElementSet> carrier() const { return poset_.upper_sets(); }

 private:
  FinitePoset poset_;
};

inline UpperSetAlgebra heyting_ops(const FinitePoset& poset) { return UpperSetAlgebra(poset); }

/// c ≤ (a ⇒ b) iff c ∧ a ≤ b over every triple of the carrier.
inline std::optional<std::string> heyting_adjunction_violation(const UpperSetAlgebra& h) {
  const auto carrier = h.carrier();
  for (const auto& a : carrier)
    for (const auto& b : carrier) {
      const ElementSet imp = h.implies(a, b);
      if (!h.poset().is_upper(imp)) return "implication is not an upper set";
      for (const auto& c : carrier)
        if (h.leq(c, imp) != h.leq(h.meet(c, a), b)) return "adjunction fails";
    }
  return std::nullopt;
}

/// The closure of a set of upper sets under binary meet and join, with
/// implication computed as the relative pseudocomplement inside the carrier.
class GeneratedAlgebra {
 public:
  GeneratedAlgebra(FinitePoset poset, std::vector<ElementSet> carrier)
      : ambient_(std::move(poset)), carrier_(std::move(carrier)) {
    if (ambient_.poset().size() <= 64)
      for (const auto& c : carrier_) words_.push_back(c.to_ulong());
  }

  const FinitePoset& poset() const { return ambient_.poset(); }
  const std::vector<ElementSet>& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }

  std::size_t index_of(const ElementSet& u) const {
    auto it = std::lower_bound(carrier_.begin(), carrier_.end(), u);
    if (it == carrier_.end() || *it != u)
      throw Error(ErrorCode::ForeignElement, "upper set is not in the generated algebra");
    return static_cast<std::size_t>(it - carrier_.begin());
  }
  bool contains(const ElementSet& u) const {
    return std::binary_search(carrier_.begin(), carrier_.end(), u);
  }

  /// Carrier extremes (join and meet of everything); not necessarily the
  /// ambient top and bottom.
  ElementSet top() const {
    ElementSet t = poset().empty_set();
    for (const auto& c : carrier_) t |= c;
    return t;
  }
  ElementSet bottom() const {
    ElementSet b = poset().full_set();
    for (const auto& c : carrier_) b &= c;
    return b;
  }

  ElementSet meet(const ElementSet& a, const ElementSet& b) const { return a & b; }
  ElementSet join(const ElementSet& a, const ElementSet& b) const { return a | b; }

  /// Greatest carrier element c with c ∧ a ≤ b.
  ElementSet implies(const ElementSet& a, const ElementSet& b) const {
    if (!words_.empty()) {
      const std::uint64_t w = implies_word(a.to_ulong(), b.to_ulong());
      return ElementSet(poset().size(), static_cast<unsigned long>(w));
    }
    std::optional<ElementSet> best;
    for (const auto& c : carrier_)
      if ((c & a).is_subset_of(b)) best = best ? (*best | c) : c;
    if (!best || !contains(*best) || !(*best & a).is_subset_of(b))
      throw Error(ErrorCode::InternalInvariant, "relative pseudocomplement does not exist");
    return *best;
  }

  ElementSet ambient_implies(const ElementSet& a, const ElementSet& b) const {
    return ambient_.implies(a, b);
  }

  /// Carrier index pairs (a, b) where the ambient implication differs from
  /// the carrier's relative pseudocomplement.
  std::vector<std::pair<std::size_t, std::size_t>> divergences() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < carrier_.size(); ++i)
      for (std::size_t j = 0; j < carrier_.size(); ++j)
        if (implies(carrier_[i], carrier_[j]) != ambient_implies(carrier_[i], carrier_[j]))
          out.emplace_back(i, j);
    return out;
  }

  /// Closure, distributivity and the relative-pseudocomplement adjunction.
  std::optional<std::string> law_violation() const {
    if (!words_.empty()) return law_violation_words();
    for (const auto& a : carrier_)
      for (const auto& b : carrier_) {
        if (!contains(a & b) || !contains(a | b)) return "carrier not closed under meet/join";
        const ElementSet imp = implies(a, b);
        for (const auto& c : carrier_) {
          if ((a & (b | c)) != ((a & b) | (a & c))) return "not distributive";
          if (c.is_subset_of(imp) != (c & a).is_subset_of(b)) return "adjunction fails";
        }
      }
    return std::nullopt;
  }

 private:
  bool contains_word(std::uint64_t w) const {
    return contains(ElementSet(poset().size(), static_cast<unsigned long>(w)));
  }

  std::uint64_t implies_word(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t best = 0;
    bool found = false;
    for (std::uint64_t c : words_)
      if ((c & a & ~b) == 0) {
        best |= c;
        found = true;
      }
    if (!found || (best & a & ~b) != 0 || !contains_word(best))
      throw Error(ErrorCode::InternalInvariant, "relative pseudocomplement does not exist");
    return best;
  }

  std::optional<std::string> law_violation_words() const {
    const std::unordered_set<std::uint64_t> members(words_.begin(), words_.end());
    for (std::uint64_t a : words_)
      for (std::uint64_t b : words_) {
        if (!members.count(a & b) || !members.count(a | b)) return "carrier not closed under meet/join";
        const std::uint64_t imp = implies_word(a, b);
        for (std::uint64_t c : words_) {
          if ((a & (b | c)) != ((a & b) | (a & c))) return "not distributive";
          if (((c & ~imp) == 0) != ((c & a & ~b) == 0)) return "adjunction fails";
        }
      }
    return std::nullopt;
  }

  UpperSetAlgebra ambient_;
  std::vector<ElementSet> carrier_;  // sorted, distinct
  std::vector<std::uint64_t> words_;  // carrier as machine words when the poset fits in 64 bits
};

/// Closes the generators under pairwise meet and join by fixpoint iteration.
inline GeneratedAlgebra generate_algebra(const std::vector<ElementSet>& generators,
                                         const FinitePoset& poset) {
  std::vector<ElementSet> carrier;
  for (const auto& g : generators) {
    if (g.size() != poset.size() || !poset.is_upper(g))
      throw Error(ErrorCode::NotAnUpperSet, "generator is not an upper set of the poset");
    carrier.push_back(g);
  }
  std::sort(carrier.begin(), carrier.end());
  carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t k = carrier.size();
    std::vector<ElementSet> fresh;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        for (ElementSet c : {carrier[i] & carrier[j], carrier[i] | carrier[j]})
          if (!std::binary_search(carrier.begin(), carrier.end(), c)) fresh.push_back(std::move(c));
    if (!fresh.empty()) {
      grew = true;
      carrier.insert(carrier.end(), fresh.begin(), fresh.end());
      std::sort(carrier.begin(), carrier.end());
      carrier.erase(std::unique(carrier.begin(), carrier.end()), carrier.end());
    }
  }
  return GeneratedAlgebra(poset, std::move(carrier));
}

struct GammaReport {
  bool ok = false;
  std::size_t families = 0;    // compatible sieve families, built stage by stage
  std::size_t upper_sets = 0;  // upper sets of the poset
  std::string detail;
};

/// Checks that compatible families of sieves (global elements of Ω)
/// correspond one-to-one with upper sets via U ↦ (p ↦ U ∩ ↑p).
inline GammaReport gamma_iso_check(const FinitePoset& poset, std::size_t max_size = 16) {
  GammaReport r;
  if (poset.size() > max_size) {
    r.detail = "poset too large for exhaustive check";
    return r;
  }
  const auto order = poset.top_down();
  const std::size_t k = poset.size();

  // Enumerate families by choosing a sieve at each element, top-down, that is
  // compatible with the choices already made above it.
  std::vector<std::vector<Sieve>> options(k);
  for (std::size_t p = 0; p < k; ++p) options[p] = sieves_at(poset, p);
  std::vector<std::optional<Sieve>> chosen(k);
  std::vector<std::vector<Sieve>> families;
  std::function<void(std::size_t)> rec = [&](std::size_t pos) {
    if (pos == k) {
      std::vector<Sieve> fam;
      for (auto& c : chosen) fam.push_back(*c);
      families.push_back(std::move(fam));
      return;
    }
    const std::size_t p = order[pos];
    for (const auto& s : options[p]) {
      bool ok = true;
      for (std::size_t q = 0; q < k && ok; ++q)
        if (poset.less(p, q) && restrict_sieve(poset, s, q) != *chosen[q]) ok = false;
      if (!ok) continue;
      chosen[p] = s;
      rec(pos + 1);
      chosen[p].reset();
    }
  };
  rec(0);

  const auto uppers = poset.upper_sets();
  r.families = families.size();
  r.upper_sets = uppers.size();

  // Family → upper set {p : p ∈ S_p}, which must invert U ↦ (U ∩ ↑p).
  std::vector<ElementSet> images;
  for (const auto& fam : families) {
    ElementSet u = poset.empty_set();
    for (std::size_t p = 0; p < k; ++p)
      if (fam[p].members.test(p)) u.set(p);
    if (!poset.is_upper(u)) {
      r.detail = "family does not determine an upper set";
      return r;
    }
    const GlobalElement g{u};
    for (std::size_t p = 0; p < k; ++p)
      if (g.at(poset, p) != fam[p]) {
        r.detail = "family is not recovered from its upper set";
        return r;
      }
    images.push_back(std::move(u));
  }
  std::sort(images.begin(), images.end());
  const bool injective = std::adjacent_find(images.begin(), images.end()) == images.end();
  for (const auto& u : uppers)
    if (!is_natural_family(poset, GlobalElement{u})) {
      r.detail = "upper set gives an incompatible family";
      return r;
    }
  r.ok = injective && images == uppers;
  if (!r.ok) r.detail = "families and upper sets do not correspond";
  return r;
}

}  // namespace qmt
