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
#include <vector>

#include "qmt/error.hpp"
#include "qmt/event.hpp"

namespace qmt {

/// A set partition of {0, ..., n-1}. Blocks are kept sorted by their
/// smallest member, which makes the block-label vector a restricted growth
/// string and gives every partition one canonical form.
class Partition {
 public:
  Partition() = default;

  static Partition from_blocks(int n, std::vector<Event> blocks) {
    const Event omega = Event::full(n);
    Event seen;
    for (Event b : blocks) {
      if (b.empty()) throw Error(ErrorCode::InvalidPartition, "partition blocks must be nonempty");
      if (!b.subset_of(omega))
        throw Error(ErrorCode::InvalidPartition, "block lies outside the sample space");
      if (b.intersects(seen)) throw Error(ErrorCode::InvalidPartition, "blocks overlap");
      seen = seen | b;
    }
    if (seen != omega) throw Error(ErrorCode::InvalidPartition, "blocks do not cover the sample space");
    std::sort(blocks.begin(), blocks.end(),
              [](Event x, Event y) { return x.lowest() < y.lowest(); });
    Partition p;
    p.n_ = n;
    p.blocks_ = std::move(blocks);
    p.labels_.assign(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < p.blocks_.size(); ++i)
      for (int x : p.blocks_[i].members()) p.labels_[static_cast<std::size_t>(x)] = static_cast<int>(i);
    return p;
  }

  /// From a restricted growth string: labels[0] = 0 and each label is at
  /// most one more than every earlier label's maximum.
  static Partition from_labels(const std::vector<int>& labels) {
    const int n = static_cast<int>(labels.size());
    int k = 0;
    for (int l : labels) k = std::max(k, l + 1);
    std::vector<Event> blocks(static_cast<std::size_t>(k));
    for (int i = 0; i < n; ++i) {
      auto& b = blocks.at(static_cast<std::size_t>(labels[static_cast<std::size_t>(i)]));
      b = b | Event::singleton(i);
    }
    return from_blocks(n, std::move(blocks));
  }

  static Partition finest(int n) {
    std::vector<Event> blocks;
    for (int i = 0; i < n; ++i) blocks.push_back(Event::singleton(i));
    return from_blocks(n, std::move(blocks));
  }
  static Partition coarsest(int n) { return from_blocks(n, {Event::full(n)}); }

  /// {A} together with the singletons of Ω∖A: the finest partition having A
  /// as a block.
  static Partition isolating(int n, Event a) {
    std::vector<Event> blocks{a};
    for (int x : a.complement(n).members()) blocks.push_back(Event::singleton(x));
    return from_blocks(n, std::move(blocks));
  }

  int universe() const { return n_; }
  int size() const { return static_cast<int>(blocks_.size()); }
  const std::vector<Event>& blocks() const { return blocks_; }
  const std::vector<int>& labels() const { return labels_; }
  Event omega() const { return Event::full(n_); }

  bool has_block(Event b) const {
    return std::find(blocks_.begin(), blocks_.end(), b) != blocks_.end();
  }

  /// The block containing every member of a nonempty event, or ∅ if the
  /// event straddles blocks.
  Event block_containing(Event e) const {
    if (e.empty()) return Event{};
    const Event b = blocks_[static_cast<std::size_t>(labels_[static_cast<std::size_t>(e.lowest())])];
    return e.subset_of(b) ? b : Event{};
  }

  /// Membership in E_Λ: the event is a union of blocks.
  bool generates(Event e) const {
    for (Event b : blocks_)
      if (b.intersects(e) && !b.subset_of(e)) return false;
    return e.subset_of(omega());
  }

  /// The union of the blocks selected by the bits of `selector`.
  Event union_of(Event::mask_type selector) const {
    Event e;
    for (std::size_t i = 0; i < blocks_.size(); ++i)
      if ((selector >> i) & 1u) e = e | blocks_[i];
    return e;
  }

  /// E_Λ: all 2^|Λ| unions of blocks, ascending.
  std::vector<Event> events() const {
    std::vector<Event> out;
    const auto count = Event::mask_type{1} << blocks_.size();
    out.reserve(count);
    for (Event::mask_type s = 0; s < count; ++s) out.push_back(union_of(s));
    std::sort(out.begin(), out.end());
    return out;
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.n_ == b.n_ && a.labels_ == b.labels_;
  }
  /// Lexicographic on the restricted growth string.
  friend std::strong_ordering operator<=>(const Partition& a, const Partition& b) {
    if (auto c = a.n_ <=> b.n_; c != 0) return c;
    return a.labels_ <=> b.labels_;
  }

 private:
  int n_ = 0;
  std::vector<Event> blocks_;
  std::vector<int> labels_;
};

/// All set partitions of an n-element space in restricted-growth-string
/// lexicographic order, from the coarsest to the finest.
inline std::vector<Partition> enumerate_partitions(int n, int cap = history_cap()) {
  if (n < 1 || n > cap)
    throw Error(ErrorCode::CapExceeded,
                "cannot enumerate partitions of " + std::to_string(n) +
                    " histories (cap " + std::to_string(cap) + ")");
  std::vector<Partition> out;
  std::vector<int> rgs(static_cast<std::size_t>(n), 0);
  std::vector<int> prefix_max(static_cast<std::size_t>(n), 0);
  while (true) {
    out.push_back(Partition::from_labels(rgs));
    int i = n - 1;
    while (i > 0 && rgs[static_cast<std::size_t>(i)] > prefix_max[static_cast<std::size_t>(i - 1)]) --i;
    if (i == 0) break;
    ++rgs[static_cast<std::size_t>(i)];
    prefix_max[static_cast<std::size_t>(i)] =
        std::max(prefix_max[static_cast<std::size_t>(i - 1)], rgs[static_cast<std::size_t>(i)]);
    for (int j = i + 1; j < n; ++j) {
      rgs[static_cast<std::size_t>(j)] = 0;
      prefix_max[static_cast<std::size_t>(j)] = prefix_max[static_cast<std::size_t>(i)];
    }
  }
  return out;
}

inline void require_same_space(const Partition& a, const Partition& b) {
  if (a.universe() != b.universe())
    throw Error(ErrorCode::SpaceMismatch, "partitions of spaces of sizes " +
                                              std::to_string(a.universe()) + " and " +
                                              std::to_string(b.universe()));
}

/// Λ1 refines Λ2: every block of Λ1 lies inside some block of Λ2.
/// Equivalently E_Λ1 ⊇ E_Λ2, i.e. Λ1 ≤ Λ2 in the graining poset.
inline bool refines(const Partition& fine, const Partition& coarse) {
  require_same_space(fine, coarse);
  for (Event b : fine.blocks())
    if (coarse.block_containing(b).empty()) return false;
  return true;
}

/// E_Λ together with the partition generating it.
struct Sublattice {
  Partition source;
  std::vector<Event> events;

  bool contains(Event e) const { return std::binary_search(events.begin(), events.end(), e); }
  std::size_t size() const { return events.size(); }
};

inline Sublattice sublattice(const Partition& p) { return {p, p.events()}; }

/// "a|b,c" rendering with blocks separated by '|'.
inline std::string format_partition(const SampleSpace& space, const Partition& p) {
  std::string out;
  for (std::size_t i = 0; i < p.blocks().size(); ++i) {
    if (i) out += '|';
    bool first = true;
    for (int x : p.blocks()[i].members()) {
      if (!first) out += ',';
      out += space.label(x);
      first = false;
    }
  }
  return out;
}

/// Inverse of format_partition.
inline Partition parse_partition(const SampleSpace& space, const std::string& text) {
  std::vector<Event> blocks;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto bar = std::min(text.find('|', start), text.size());
    const std::string block = text.substr(start, bar - start);
    Event e;
    std::size_t s = 0;
    while (s <= block.size()) {
      const auto comma = std::min(block.find(',', s), block.size());
      const std::string label = block.substr(s, comma - s);
      if (label.empty()) throw Error(ErrorCode::InvalidPartition, "empty label in '" + text + "'");
      const Event x = Event::singleton(space.index_of(label));
      if (x.intersects(e)) throw Error(ErrorCode::InvalidPartition, "repeated label " + label);
      e = e | x;
      s = comma + 1;
    }
    blocks.push_back(e);
    start = bar + 1;
  }
  return Partition::from_blocks(space.size(), std::move(blocks));
}

}  // namespace qmt
