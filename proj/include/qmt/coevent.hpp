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

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qmt/error.hpp"
#include "qmt/partition.hpp"
#include "qmt/theory.hpp"

namespace qmt {

/// A map 2^Ω → Z2 that is not everywhere zero, stored as its support
/// (bit m set iff the event with mask m is mapped to 1).
class Coevent {
 public:
  Coevent(int n, boost::dynamic_bitset<> support) : n_(n), support_(std::move(support)) {
    if (support_.size() != (std::size_t{1} << n))
      throw Error(ErrorCode::DimensionMismatch, "support table has the wrong size");
    if (support_.none()) throw Error(ErrorCode::ZeroCoevent, "a coevent may not be everywhere zero");
  }

  static Coevent from_support(int n, const std::vector<Event>& events) {
    boost::dynamic_bitset<> bits(std::size_t{1} << n);
    for (Event e : events) {
      if (!e.subset_of(Event::full(n)))
        throw Error(ErrorCode::ForeignEvent, "support event outside the sample space");
      bits.set(e.bits());
    }
    return Coevent(n, std::move(bits));
  }

  int universe() const { return n_; }
  const boost::dynamic_bitset<>& support() const { return support_; }

  bool eval(Event b) const {
    if (!b.subset_of(Event::full(n_)))
      throw Error(ErrorCode::ForeignEvent, "event outside the coevent's domain");
    return support_.test(b.bits());
  }

  std::vector<Event> support_events() const {
    std::vector<Event> out;
    for (auto m = support_.find_first(); m != boost::dynamic_bitset<>::npos; m = support_.find_next(m))
      out.push_back(Event(static_cast<Event::mask_type>(m)));
    return out;
  }

  friend bool operator==(const Coevent&, const Coevent&) = default;

 private:
  int n_;
  boost::dynamic_bitset<> support_;
};

/// A multiplicative coevent, represented by its dual event φ*: the support
/// is the principal filter {B : φ* ⊆ B}.
class MultiplicativeCoevent {
 public:
  MultiplicativeCoevent(int n, Event dual) : n_(n), dual_(dual) {
    if (dual.empty()) throw Error(ErrorCode::EmptyDual, "the dual of a coevent is nonempty");
    if (!dual.subset_of(Event::full(n)))
      throw Error(ErrorCode::ForeignEvent, "dual event outside the sample space");
  }

  int universe() const { return n_; }
  Event dual() const { return dual_; }
  bool eval(Event b) const {
    if (!b.subset_of(Event::full(n_)))
      throw Error(ErrorCode::ForeignEvent, "event outside the coevent's domain");
    return dual_.subset_of(b);
  }

  Coevent to_coevent() const {
    boost::dynamic_bitset<> bits(std::size_t{1} << n_);
    for_each_subset(dual_.complement(n_), [&](Event extra) { bits.set((dual_ | extra).bits()); });
    return Coevent(n_, std::move(bits));
  }

  friend bool operator==(const MultiplicativeCoevent&, const MultiplicativeCoevent&) = default;
  friend auto operator<=>(const MultiplicativeCoevent& a, const MultiplicativeCoevent& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.dual_ <=> b.dual_;
  }

 private:
  int n_;
  Event dual_;
};

/// A*: the coevent B ↦ [A ⊆ B].
inline MultiplicativeCoevent co_dual(int n, Event a) { return MultiplicativeCoevent(n, a); }

inline bool eval(const Coevent& phi, Event b) { return phi.eval(b); }
inline bool eval(const MultiplicativeCoevent& phi, Event b) { return phi.eval(b); }

/// A pair (A, B) with φ(A∧B) ≠ φ(A)∧φ(B), if any.
inline std::optional<std::pair<Event, Event>> multiplicative_witness(const Coevent& phi) {
  const auto count = static_cast<Event::mask_type>(std::size_t{1} << phi.universe());
  const auto& s = phi.support();
  for (Event::mask_type a = 0; a < count; ++a)
    for (Event::mask_type b = a; b < count; ++b)
      if (s.test(a & b) != (s.test(a) && s.test(b))) return std::pair{Event(a), Event(b)};
  return std::nullopt;
}

/// The multiplicative rule φ(A∧B) = φ(A)∧φ(B) over all pairs.
inline bool is_multiplicative(const Coevent& phi) { return !multiplicative_witness(phi); }

/// The support is upward closed and closed under intersection (a filter,
/// possibly the improper one containing ∅). Agrees with is_multiplicative.
inline bool is_filter(const Coevent& phi) {
  const int n = phi.universe();
  const auto& s = phi.support();
  for (auto m = s.find_first(); m != boost::dynamic_bitset<>::npos; m = s.find_next(m)) {
    const Event a(static_cast<Event::mask_type>(m));
    for (int x : a.complement(n).members())
      if (!s.test((a | Event::singleton(x)).bits())) return false;
    for (auto k = s.find_next(m); k != boost::dynamic_bitset<>::npos; k = s.find_next(k))
      if (!s.test(m & k)) return false;
  }
  return true;
}

/// φ*: the principal element (intersection) of the support.
inline MultiplicativeCoevent dual(const Coevent& phi) {
  if (auto w = multiplicative_witness(phi))
    throw Error(ErrorCode::NotMultiplicative,
                "multiplicative rule fails at masks " + std::to_string(w->first.bits()) + ", " +
                    std::to_string(w->second.bits()));
  Event meet = Event::full(phi.universe());
  for (Event e : phi.support_events()) meet = meet & e;
  if (meet.empty()) throw Error(ErrorCode::EmptyDual, "the support contains the empty event");
  return MultiplicativeCoevent(phi.universe(), meet);
}

inline void require_same_space(const Coevent& a, const Coevent& b) {
  if (a.universe() != b.universe())
    throw Error(ErrorCode::SpaceMismatch, "coevents over different sample spaces");
}

/// φ dominates ψ: φ(A) = 1 implies ψ(A) = 1, i.e. supp φ ⊆ supp ψ.
inline bool dominates(const Coevent& phi, const Coevent& psi) {
  require_same_space(phi, psi);
  return phi.support().is_subset_of(psi.support());
}

/// For multiplicative coevents domination is reverse inclusion of duals.
inline bool dominates(const MultiplicativeCoevent& phi, const MultiplicativeCoevent& psi) {
  if (phi.universe() != psi.universe())
    throw Error(ErrorCode::SpaceMismatch, "coevents over different sample spaces");
  return psi.dual().subset_of(phi.dual());
}

/// Preclusion: no null event lies in the support.
template <class Field>
bool is_preclusive(const HistoriesTheory<Field>& theory, const Coevent& phi) {
  if (phi.universe() != theory.size())
    throw Error(ErrorCode::SpaceMismatch, "coevent and theory differ in sample space size");
  for (Event z : theory.null_events())
    if (phi.support().test(z.bits())) return false;
  return true;
}

/// A* is preclusive iff no null event contains A.
template <class Field>
bool is_preclusive(const HistoriesTheory<Field>& theory, const MultiplicativeCoevent& phi) {
  if (phi.universe() != theory.size())
    throw Error(ErrorCode::SpaceMismatch, "coevent and theory differ in sample space size");
  for (Event z : theory.null_events())
    if (phi.dual().subset_of(z)) return false;
  return true;
}

/// Exactly one block of Λ is mapped to 1.
inline bool is_classical_on(const Coevent& phi, const Partition& p) {
  if (phi.universe() != p.universe())
    throw Error(ErrorCode::SpaceMismatch, "coevent and partition differ in sample space size");
  int ones = 0;
  for (Event b : p.blocks()) ones += phi.support().test(b.bits()) ? 1 : 0;
  return ones == 1;
}

/// A* is classical on Λ iff A lies inside a single block.
inline bool is_classical_on(const MultiplicativeCoevent& phi, const Partition& p) {
  if (phi.universe() != p.universe())
    throw Error(ErrorCode::SpaceMismatch, "coevent and partition differ in sample space size");
  return !p.block_containing(phi.dual()).empty();
}

/// The restriction of φ to E_Λ is a nonzero lattice homomorphism into Z2
/// (preserves ∧, ∨ and sends ∅ to 0). For multiplicative coevents this is
/// equivalent to is_classical_on.
inline bool restricts_to_hom(const Coevent& phi, const Partition& p) {
  if (phi.universe() != p.universe())
    throw Error(ErrorCode::SpaceMismatch, "coevent and partition differ in sample space size");
  const auto events = p.events();
  const auto& s = phi.support();
  if (s.test(0)) return false;
  bool nonzero = false;
  for (Event a : events) {
    nonzero = nonzero || s.test(a.bits());
    for (Event b : events) {
      if (s.test((a & b).bits()) != (s.test(a.bits()) && s.test(b.bits()))) return false;
      if (s.test((a | b).bits()) != (s.test(a.bits()) || s.test(b.bits()))) return false;
    }
  }
  return nonzero;
}

}  // namespace qmt
