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

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "qmt/error.hpp"

namespace qmt {

/// A subset of a finite poset's elements, by index.
using ElementSet = boost::dynamic_bitset<>;

/// A finite partial order on {0, ..., k-1}, stored as the principal up-set
/// ↑p of every element.
class FinitePoset {
 public:
  FinitePoset() = default;

  /// Tabulates `leq` and checks reflexivity, antisymmetry and transitivity.
  template <class Leq>
  static FinitePoset from_relation(std::size_t k, Leq&& leq) {
    FinitePoset p;
    p.up_.assign(k, ElementSet(k));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        if (leq(i, j)) p.up_[i].set(j);
    p.validate();
    return p;
  }

  std::size_t size() const { return up_.size(); }
  bool leq(std::size_t i, std::size_t j) const { return up_[i].test(j); }
  bool less(std::size_t i, std::size_t j) const { return i != j && leq(i, j); }
  const ElementSet& up(std::size_t i) const { return up_.at(i); }

  void require_element(std::size_t p) const {
    if (p >= size())
      throw Error(ErrorCode::ForeignElement,
                  "element " + std::to_string(p) + " of a poset with " + std::to_string(size()) +
                      " elements");
  }

  ElementSet empty_set() const { return ElementSet(size()); }
  ElementSet full_set() const {
    ElementSet s(size());
    s.set();
    return s;
  }

  bool is_upper(const ElementSet& s) const {
    for (auto i = s.find_first(); i != ElementSet::npos; i = s.find_next(i))
      if (!up_[i].is_subset_of(s)) return false;
    return true;
  }

  /// Elements ordered so that every element comes after all elements above it.
  std::vector<std::size_t> top_down() const {
    std::vector<std::size_t> order(size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return up_[a].count() < up_[b].count();
    });
    return order;
  }

  /// Every upper set contained in `region`, which must itself be upper.
  /// The count can be exponential in |region|.
  std::vector<ElementSet> upper_sets_within(const ElementSet& region) const {
    std::vector<std::size_t> order;
    for (auto i : top_down())
      if (region.test(i)) order.push_back(i);
    std::vector<ElementSet> out;
    ElementSet current = empty_set();
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
      if (pos == order.size()) {
        out.push_back(current);
        return;
      }
      const std::size_t x = order[pos];
      rec(pos + 1);
      ElementSet strictly_above = up_[x];
      strictly_above.reset(x);
      if (strictly_above.is_subset_of(current)) {
        current.set(x);
        rec(pos + 1);
        current.reset(x);
      }
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<ElementSet> upper_sets() const { return upper_sets_within(full_set()); }

 private:
  void validate() const {
    const std::size_t k = size();
    for (std::size_t i = 0; i < k; ++i) {
      if (!leq(i, i))
        throw Error(ErrorCode::NotAPartialOrder, "not reflexive at " + std::to_string(i));
      for (std::size_t j = 0; j < k; ++j) {
        if (i != j && leq(i, j) && leq(j, i))
          throw Error(ErrorCode::NotAPartialOrder,
                      "not antisymmetric at " + std::to_string(i) + ", " + std::to_string(j));
        if (leq(i, j) && !up_[j].is_subset_of(up_[i]))
          throw Error(ErrorCode::NotAPartialOrder, "not transitive through " + std::to_string(j));
      }
    }
  }

  std::vector<ElementSet> up_;
};

}  // namespace qmt
