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

// Naive recomputations used to cross-check the library. Nothing here calls
// the fast paths in grainings/coevent/schemes/topos: every predicate is
// evaluated from its set-level definition over explicit tables.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <set>
#include <span>
#include <vector>

#include "qmt/event.hpp"
#include "qmt/theory.hpp"

namespace qmt::oracle {

using Blocks = std::vector<Event>;  // sorted by lowest member

/// μ(A) = Σ_{a,b ∈ A} D({a},{b}), real part.
template <class Field>
typename Field::real_type mu_double_sum(const DecoherenceMatrix<Field>& m, Event a) {
  typename Field::real_type sum(0);
  for (int i : a.members())
    for (int j : a.members()) sum += m.at(i, j).re;
  return sum;
}

/// Bell numbers from the Bell triangle.
inline std::uint64_t bell_number(int n) {
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto x : row) next.push_back(next.back() + x);
    row = std::move(next);
  }
  return row.front();
}

/// Set partitions by inserting element k into each existing block or a new
/// one. Output blocks are sorted by lowest member; the list is sorted.
inline std::vector<Blocks> partitions_by_insertion(int n) {
  std::vector<Blocks> current{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<Blocks> next;
    const Event x = Event::singleton(k);
    for (const auto& p : current) {
      for (std::size_t i = 0; i < p.size(); ++i) {
        Blocks q = p;
        q[i] = q[i] | x;
        next.push_back(q);
      }
      Blocks q = p;
      q.push_back(x);
      next.push_back(q);
    }
    current = std::move(next);
  }
  for (auto& p : current)
    std::sort(p.begin(), p.end(), [](Event a, Event b) { return a.lowest() < b.lowest(); });
  std::sort(current.begin(), current.end());
  return current;
}

/// E_Λ by closing {∅} ∪ blocks under union.
inline std::vector<Event> unions_by_closure(const Blocks& blocks) {
  std::set<Event> out{Event{}};
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Event> snapshot(out.begin(), out.end());
    for (Event a : snapshot)
      for (Event b : blocks)
        if (out.insert(a | b).second) grew = true;
  }
  return {out.begin(), out.end()};
}

/// Every block of `fine` is a subset of some block of `coarse`.
inline bool refines_by_search(const Blocks& fine, const Blocks& coarse) {
  for (Event f : fine) {
    bool inside = false;
    for (Event c : coarse) inside = inside || f.subset_of(c);
    if (!inside) return false;
  }
  return true;
}

template <class Field>
std::vector<bool> null_table(std::span<const typename Field::real_type> mu, const Field& field) {
  std::vector<bool> out;
  for (const auto& x : mu) out.push_back(field.is_zero(x));
  return out;
}

/// Kolmogorov additivity over every disjoint pair of E_Λ.
template <class Field>
bool decoherent_all_pairs(std::span<const typename Field::real_type> mu, const Field& field,
                          const Blocks& blocks) {
  const auto algebra = unions_by_closure(blocks);
  for (Event a : algebra)
    for (Event b : algebra) {
      if (a.intersects(b)) continue;
      typename Field::real_type sum = mu[a.bits()] + mu[b.bits()];
      if (!field.equal(mu[(a | b).bits()], sum)) return false;
    }
  return true;
}

/// For all null Z and blocks A, μ(A ∩ Z) = 0.
inline bool separable_naive(const std::vector<bool>& nulls, const Blocks& blocks) {
  for (std::size_t z = 0; z < nulls.size(); ++z) {
    if (!nulls[z]) continue;
    for (Event b : blocks)
      if (!nulls[(b & Event(static_cast<Event::mask_type>(z))).bits()]) return false;
  }
  return true;
}

/// A coevent as an explicit truth table over all 2^n events.
using Table = std::vector<bool>;

inline Table star_table(int n, Event a) {
  Table t(std::size_t{1} << n, false);
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = a.subset_of(Event(static_cast<Event::mask_type>(m)));
  return t;
}

inline bool multiplicative_by_pairs(const Table& t) {
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = 0; b < t.size(); ++b)
      if (t[a & b] != (t[a] && t[b])) return false;
  return true;
}

inline bool preclusive_by_scan(const Table& t, const std::vector<bool>& nulls) {
  for (std::size_t m = 0; m < t.size(); ++m)
    if (t[m] && nulls[m]) return false;
  return true;
}

/// φ dominates ψ: φ(A) = 1 ⇒ ψ(A) = 1.
inline bool dominates_by_scan(const Table& phi, const Table& psi) {
  for (std::size_t m = 0; m < phi.size(); ++m)
    if (phi[m] && !psi[m]) return false;
  return true;
}

inline bool classical_by_count(const Table& t, const Blocks& blocks) {
  int ones = 0;
  for (Event b : blocks) ones += t[b.bits()] ? 1 : 0;
  return ones == 1;
}

/// Which nonempty duals A have a multiplicative, preclusive A*.
inline std::vector<Event> preclusive_multiplicative_duals(int n, const std::vector<bool>& nulls) {
  std::vector<Event> out;
  for (Event::mask_type m = 1; m < (Event::mask_type{1} << n); ++m) {
    const Table t = star_table(n, Event(m));
    if (multiplicative_by_pairs(t) && preclusive_by_scan(t, nulls)) out.push_back(Event(m));
  }
  return out;
}

/// Minimal duals. primitive: no other dual strictly inside; literal: no
/// distinct member whose table dominates this one.
inline std::vector<Event> minimal_duals(int n, const std::vector<Event>& duals, bool primitive) {
  std::vector<Event> out;
  for (Event a : duals) {
    bool minimal = true;
    for (Event b : duals) {
      if (a == b) continue;
      const bool beaten = primitive ? (b.subset_of(a) && b != a)
                                    : dominates_by_scan(star_table(n, b), star_table(n, a));
      if (beaten) minimal = false;
    }
    if (minimal) out.push_back(a);
  }
  return out;
}

/// Cons_D / Cons_C by the literal support equality supp(A*) = supp(φ_Λ^A)
/// (both as sets of events), or the loose "A is a block" reading.
inline std::vector<Event> consistent_duals(int n, const std::vector<Blocks>& decoherent,
                                           const std::vector<bool>& nulls, bool literal,
                                           bool preclusive) {
  std::vector<Event> out;
  for (Event::mask_type m = 1; m < (Event::mask_type{1} << n); ++m) {
    const Event a(m);
    const Table star = star_table(n, a);
    bool member = false;
    for (const auto& blocks : decoherent) {
      if (std::find(blocks.begin(), blocks.end(), a) == blocks.end()) continue;
      const auto algebra = unions_by_closure(blocks);
      std::vector<Event> hom_support;
      for (Event b : algebra)
        if (a.subset_of(b)) hom_support.push_back(b);
      bool ok = true;
      if (literal) {
        std::vector<Event> star_support;
        for (std::size_t x = 0; x < star.size(); ++x)
          if (star[x]) star_support.push_back(Event(static_cast<Event::mask_type>(x)));
        ok = star_support == hom_support;
      }
      if (ok && preclusive)
        for (Event b : hom_support) ok = ok && !nulls[b.bits()];
      if (ok) member = true;
    }
    if (member) out.push_back(a);
  }
  return out;
}

/// Upper sets of a relation given as leq(i, j), by filtering all subsets.
inline std::vector<std::vector<bool>> upper_sets_by_filter(
    std::size_t k, const std::function<bool(std::size_t, std::size_t)>& leq) {
  std::vector<std::vector<bool>> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
    std::vector<bool> u(k);
    for (std::size_t i = 0; i < k; ++i) u[i] = (s >> i) & 1u;
    bool upper = true;
    for (std::size_t i = 0; i < k && upper; ++i)
      for (std::size_t j = 0; j < k && upper; ++j)
        if (u[i] && leq(i, j) && !u[j]) upper = false;
    if (upper) out.push_back(std::move(u));
  }
  return out;
}

inline bool subset(const std::vector<bool>& a, const std::vector<bool>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

inline std::vector<bool> intersect(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<bool> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

/// The greatest element w of `carrier` with w ∧ a ≤ b, found by search.
/// Returns an empty vector if no greatest element exists.
inline std::vector<bool> implies_by_search(const std::vector<std::vector<bool>>& carrier,
                                           const std::vector<bool>& a, const std::vector<bool>& b) {
  std::vector<const std::vector<bool>*> candidates;
  for (const auto& w : carrier)
    if (subset(intersect(w, a), b)) candidates.push_back(&w);
  for (const auto* w : candidates) {
    bool greatest = true;
    for (const auto* v : candidates)
      if (!subset(*v, *w)) {
        greatest = false;
        break;
      }
    if (greatest) return *w;
  }
  return {};
}

}  // namespace qmt::oracle
