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
#include <bit>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_set>
#include <vector>

#include "qmt/error.hpp"

namespace qmt {

/// Largest sample space representable by an Event mask.
inline constexpr int kHardHistoryLimit = 20;
inline constexpr int kDefaultHistoryCap = 10;

/// Configured cap on the number of histories. QMT_MAX_HISTORIES overrides
/// the default; values outside [1, kHardHistoryLimit] are ignored.
inline int history_cap() {
  if (const char* env = std::getenv("QMT_MAX_HISTORIES")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value >= 1 && value <= kHardHistoryLimit)
      return static_cast<int>(value);
  }
  return kDefaultHistoryCap;
}

/// A subset of the sample space {0, ..., n-1}, stored as a bit vector.
/// Ordering is the numeric order of the mask, which is the lexicographic
/// order of the bit vector read from the highest index down.
class Event {
 public:
  using mask_type = std::uint32_t;

  constexpr Event() = default;
  constexpr explicit Event(mask_type bits) : bits_(bits) {}

  static constexpr Event full(int n) {
    return Event(n >= 32 ? ~mask_type{0} : (mask_type{1} << n) - 1);
  }
  static constexpr Event singleton(int i) { return Event(mask_type{1} << i); }

  constexpr mask_type bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr bool subset_of(Event other) const {
    return (bits_ & ~other.bits_) == 0;
  }
  constexpr bool intersects(Event other) const {
    return (bits_ & other.bits_) != 0;
  }
  constexpr int lowest() const { return std::countr_zero(bits_); }

  /// Complement relative to the n-element sample space.
  constexpr Event complement(int n) const {
    return Event(~bits_ & full(n).bits_);
  }
  constexpr Event minus(Event other) const {
    return Event(bits_ & ~other.bits_);
  }

  friend constexpr Event operator|(Event a, Event b) {
    return Event(a.bits_ | b.bits_);
  }
  friend constexpr Event operator&(Event a, Event b) {
    return Event(a.bits_ & b.bits_);
  }
  friend constexpr auto operator<=>(Event, Event) = default;

  std::vector<int> members() const {
    std::vector<int> out;
    for (mask_type b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

 private:
  mask_type bits_ = 0;
};

/// Calls f(sub) for every subset of `mask`, including the empty set and
/// `mask` itself, in increasing numeric order.
template <class F>
void for_each_subset(Event mask, F&& f) {
  const Event::mask_type m = mask.bits();
  Event::mask_type s = 0;
  while (true) {
    f(Event(s));
    if (s == m) break;
    s = (s - m) & m;
  }
}

/// Ω: an ordered list of distinct, nonempty history labels.
class SampleSpace {
 public:
  SampleSpace() = default;

  explicit SampleSpace(std::vector<std::string> labels, int cap = history_cap())
      : labels_(std::move(labels)) {
    if (labels_.empty())
      throw Error(ErrorCode::DimensionMismatch, "sample space must have at least one history");
    cap = std::min(cap, kHardHistoryLimit);
    if (static_cast<int>(labels_.size()) > cap)
      throw Error(ErrorCode::CapExceeded, std::to_string(labels_.size()) +
                                              " histories exceed the cap of " +
                                              std::to_string(cap));
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
      if (l.empty()) throw Error(ErrorCode::Schema, "history labels must be nonempty");
      if (!seen.insert(l).second)
        throw Error(ErrorCode::Schema, "duplicate history label '" + l + "'");
    }
  }

  /// Labels a, b, c, ... for quick construction.
  static SampleSpace indexed(int n, int cap = history_cap()) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) labels.push_back(std::string(1, static_cast<char>('a' + i % 26)) +
                                                 (i >= 26 ? std::to_string(i / 26) : ""));
    return SampleSpace(std::move(labels), cap);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_.at(static_cast<std::size_t>(i)); }
  Event omega() const { return Event::full(size()); }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[static_cast<std::size_t>(i)] == label) return i;
    throw Error(ErrorCode::ForeignEvent, "unknown history label '" + label + "'");
  }

  Event event(const std::vector<std::string>& members) const {
    Event e;
    for (const auto& m : members) e = e | Event::singleton(index_of(m));
    return e;
  }

  bool owns(Event e) const { return e.subset_of(omega()); }

  void require_owned(Event e) const {
    if (!owns(e))
      throw Error(ErrorCode::ForeignEvent,
                  "event mask " + std::to_string(e.bits()) + " lies outside a space of " +
                      std::to_string(size()) + " histories");
  }

  /// "{a,b}" style rendering; "{}" for the empty event.
  std::string format(Event e) const {
    std::string out = "{";
    bool first = true;
    for (int i : e.members()) {
      if (!first) out += ',';
      out += label(i);
      first = false;
    }
    return out + "}";
  }

  friend bool operator==(const SampleSpace&, const SampleSpace&) = default;

 private:
  std::vector<std::string> labels_;
};

}  // namespace qmt
