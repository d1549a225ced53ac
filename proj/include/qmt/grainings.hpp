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
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qmt/error.hpp"
#include "qmt/partition.hpp"
#include "qmt/theory.hpp"

namespace qmt {

/// The coarse-grained theory (E_Λ, μ|_Λ). Holds a reference to the theory.
template <class Field>
class CoarseGrained {
 public:
  CoarseGrained(const HistoriesTheory<Field>& theory, Partition partition)
      : theory_(&theory), partition_(std::move(partition)), events_(partition_.events()) {
    if (partition_.universe() != theory.size())
      throw Error(ErrorCode::SpaceMismatch, "partition and theory differ in sample space size");
  }

  const Partition& partition() const { return partition_; }
  const std::vector<Event>& events() const { return events_; }

  const typename Field::real_type& mu(Event a) const {
    if (!partition_.generates(a))
      throw Error(ErrorCode::ForeignEvent,
                  theory_->space().format(a) + " is not in the coarse-grained algebra");
    return theory_->mu(a);
  }

  bool kolmogorov_holds() const {
    return !kolmogorov_witness(theory_->mu_table(), std::span<const Event>(events_),
                               theory_->field());
  }

 private:
  const HistoriesTheory<Field>* theory_;
  Partition partition_;
  std::vector<Event> events_;
};

template <class Field>
CoarseGrained<Field> coarse_grain(const HistoriesTheory<Field>& theory, const Partition& p) {
  return CoarseGrained<Field>(theory, p);
}

template <class Field>
void require_space(const HistoriesTheory<Field>& theory, const Partition& p) {
  if (p.universe() != theory.size())
    throw Error(ErrorCode::SpaceMismatch, "partition of " + std::to_string(p.universe()) +
                                              " histories used with a theory of " +
                                              std::to_string(theory.size()));
}

/// μ|_Λ is additive. For a quantum measure pairwise additivity of blocks
/// implies additivity on all of E_Λ, so only block pairs are checked.
template <class Field>
bool is_decoherent(const HistoriesTheory<Field>& theory, const Partition& p) {
  require_space(theory, p);
  const auto& blocks = p.blocks();
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j)
      if (!theory.additive(blocks[i], blocks[j])) return false;
  return true;
}

/// Every null event Z of 2^Ω meets every block in a null event.
template <class Field>
bool is_preclusively_separable(const HistoriesTheory<Field>& theory, const Partition& p) {
  require_space(theory, p);
  for (Event z : theory.null_events()) {
    if (z.empty()) continue;
    for (Event b : p.blocks())
      if (!theory.is_null(b & z)) return false;
  }
  return true;
}

enum class PosetTagName { B, D, P, PD, O, E };

inline std::string to_string(PosetTagName t) {
  switch (t) {
    case PosetTagName::B: return "B";
    case PosetTagName::D: return "D";
    case PosetTagName::P: return "P";
    case PosetTagName::PD: return "PD";
    case PosetTagName::O: return "O";
    case PosetTagName::E: return "E";
  }
  return "?";
}

/// A tagged subset of the graining poset, by element index (ascending).
struct PosetTag {
  PosetTagName name = PosetTagName::B;
  std::vector<std::size_t> members;

  bool contains(std::size_t i) const {
    return std::binary_search(members.begin(), members.end(), i);
  }
  std::size_t size() const { return members.size(); }
};

/// B: all partitions of Ω ordered by refinement (Λ1 ≤ Λ2 iff Λ1 refines Λ2),
/// with per-element decoherence and preclusive-separability flags and
/// optional designated observable / experiment upper sets.
class GrainingPoset {
 public:
  enum Flag : std::uint8_t { kDecoherent = 1, kSeparable = 2, kObservable = 4, kExperiment = 8 };

  GrainingPoset(int n, std::vector<Partition> elements, std::vector<std::uint8_t> flags)
      : n_(n), elements_(std::move(elements)), flags_(std::move(flags)) {}

  int universe() const { return n_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<Partition>& elements() const { return elements_; }
  const Partition& at(std::size_t i) const { return elements_.at(i); }

  bool leq(std::size_t i, std::size_t j) const { return refines(elements_[i], elements_[j]); }

  bool has(std::size_t i, Flag f) const { return (flags_.at(i) & f) != 0; }

  std::optional<std::size_t> index_of(const Partition& p) const {
    auto it = std::lower_bound(elements_.begin(), elements_.end(), p);
    if (it == elements_.end() || !(*it == p)) return std::nullopt;
    return static_cast<std::size_t>(it - elements_.begin());
  }

  std::size_t require_index(const Partition& p) const {
    if (auto i = index_of(p)) return *i;
    throw Error(ErrorCode::SpaceMismatch, "partition is not an element of this poset");
  }

  bool has_designation(PosetTagName t) const {
    return t == PosetTagName::O ? designated_o_ : t == PosetTagName::E ? designated_e_ : false;
  }

  // Used by designate_upper once the member set has been validated.
  void mark(PosetTagName t, const std::vector<std::size_t>& members) {
    const Flag f = t == PosetTagName::O ? kObservable : kExperiment;
    for (auto& fl : flags_) fl &= static_cast<std::uint8_t>(~f);
    for (auto i : members) flags_.at(i) |= f;
    (t == PosetTagName::O ? designated_o_ : designated_e_) = true;
  }

 private:
  int n_;
  std::vector<Partition> elements_;  // enumeration order, which is sorted
  std::vector<std::uint8_t> flags_;
  bool designated_o_ = false;
  bool designated_e_ = false;
};

template <class Field>
GrainingPoset build_poset(const HistoriesTheory<Field>& theory, int cap = history_cap()) {
  auto elements = enumerate_partitions(theory.size(), cap);
  std::vector<std::uint8_t> flags(elements.size(), 0);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (is_decoherent(theory, elements[i])) flags[i] |= GrainingPoset::kDecoherent;
    if (is_preclusively_separable(theory, elements[i])) flags[i] |= GrainingPoset::kSeparable;
  }
  return GrainingPoset(theory.size(), std::move(elements), std::move(flags));
}

/// A pair (i, j) with i in `members`, i ≤ j and j not in `members`.
inline std::optional<std::pair<std::size_t, std::size_t>> upper_set_witness(
    const GrainingPoset& poset, const std::vector<std::size_t>& members) {
  std::vector<bool> in(poset.size(), false);
  for (auto i : members) in.at(i) = true;
  for (auto i : members)
    for (std::size_t j = 0; j < poset.size(); ++j)
      if (!in[j] && poset.leq(i, j)) return std::pair{i, j};
  return std::nullopt;
}

/// The members of B carrying a computed tag. D, P and PD are upper sets by
/// theorem; a violation is reported as an internal error.
inline PosetTag sub_poset(const GrainingPoset& poset, PosetTagName tag) {
  PosetTag out{tag, {}};
  for (std::size_t i = 0; i < poset.size(); ++i) {
    bool keep = false;
    switch (tag) {
      case PosetTagName::B: keep = true; break;
      case PosetTagName::D: keep = poset.has(i, GrainingPoset::kDecoherent); break;
      case PosetTagName::P: keep = poset.has(i, GrainingPoset::kSeparable); break;
      case PosetTagName::PD:
        keep = poset.has(i, GrainingPoset::kDecoherent) && poset.has(i, GrainingPoset::kSeparable);
        break;
      case PosetTagName::O: keep = poset.has(i, GrainingPoset::kObservable); break;
      case PosetTagName::E: keep = poset.has(i, GrainingPoset::kExperiment); break;
    }
    if (keep) out.members.push_back(i);
  }
  if (auto w = upper_set_witness(poset, out.members))
    throw Error(ErrorCode::InternalUpperSetViolation,
                "B_" + to_string(tag) + " contains element " + std::to_string(w->first) +
                    " but not its coarsening " + std::to_string(w->second));
  return out;
}

/// Records a user-designated observable (O) or experiment (E) poset, which
/// must be an upper set of B.
inline PosetTag designate_upper(GrainingPoset& poset, std::vector<std::size_t> members,
                                PosetTagName tag) {
  if (tag != PosetTagName::O && tag != PosetTagName::E)
    throw Error(ErrorCode::Schema, "only the O and E posets can be designated");
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  for (auto i : members)
    if (i >= poset.size()) throw Error(ErrorCode::Schema, "designated element out of range");
  if (auto w = upper_set_witness(poset, members))
    throw Error(ErrorCode::NotAnUpperSet,
                "designated B_" + to_string(tag) + " contains element " +
                    std::to_string(w->first) + " but not its coarsening " +
                    std::to_string(w->second));
  poset.mark(tag, members);
  return {tag, std::move(members)};
}

/// Covering pairs (i, j), i < j in the order, of the Hasse diagram of the
/// sub-poset `members`.
inline std::vector<std::pair<std::size_t, std::size_t>> hasse_edges(
    const GrainingPoset& poset, const std::vector<std::size_t>& members) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (auto i : members)
    for (auto j : members) {
      if (i == j || !poset.leq(i, j)) continue;
      bool covered = true;
      for (auto k : members)
        if (k != i && k != j && poset.leq(i, k) && poset.leq(k, j)) {
          covered = false;
          break;
        }
      if (covered) edges.emplace_back(i, j);
    }
  return edges;
}

/// Graphviz rendering of the Hasse diagram of `members` (all of B by
/// default) with D/P/PD coloring: PD green, D-only blue, P-only orange,
/// neither white. Coarser partitions are drawn on top.
inline std::string poset_dot(const SampleSpace& space, const GrainingPoset& poset,
                             std::optional<std::vector<std::size_t>> members = std::nullopt) {
  std::vector<std::size_t> all;
  if (members) {
    all = *members;
  } else {
    for (std::size_t i = 0; i < poset.size(); ++i) all.push_back(i);
  }
  std::ostringstream os;
  os << "digraph B {\n  rankdir=BT;\n  node [shape=box, style=filled];\n";
  for (auto i : all) {
    const bool d = poset.has(i, GrainingPoset::kDecoherent);
    const bool p = poset.has(i, GrainingPoset::kSeparable);
    const char* color = d && p ? "palegreen" : d ? "lightblue" : p ? "orange" : "white";
    os << "  n" << i << " [label=\"" << format_partition(space, poset.at(i))
       << "\", fillcolor=" << color << "];\n";
  }
  for (auto [i, j] : hasse_edges(poset, all)) os << "  n" << i << " -> n" << j << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace qmt
