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
#include <optional>
#include <string>
#include <vector>

#include "qmt/coevent.hpp"
#include "qmt/grainings.hpp"
#include "qmt/theory.hpp"
#include "qmt/valuations.hpp"

namespace qmt {

/// How "minimal" is read when selecting from a set of multiplicative
/// coevents.
///  - Primitive: no other member has a strictly smaller dual. This is the
///    reading under which M reduces to Cl for probability measures.
///  - Literal: no distinct member dominates it (supp ψ ⊆ supp φ), which
///    selects the members with inclusion-maximal duals.
enum class Minimality { Primitive, Literal };

/// How the support-equality condition of Cons_D / Cons_C is read.
///  - Literal: supp(A*) = supp(φ_Λ^A) as sets of events, which forces Λ to
///    be {A} plus the singletons of Ω∖A.
///  - Loose: A is a block of some Λ in B_D.
enum class Reading { Literal, Loose };

inline std::string to_string(Minimality m) {
  return m == Minimality::Primitive ? "primitive" : "literal";
}
inline std::string to_string(Reading r) { return r == Reading::Literal ? "literal" : "loose"; }

struct SchemeResult {
  std::string scheme;
  std::optional<Minimality> minimality;
  std::optional<Reading> reading;
  std::vector<MultiplicativeCoevent> coevents;  // ascending by dual

  bool empty() const { return coevents.empty(); }
  bool contains(Event dual) const {
    return std::any_of(coevents.begin(), coevents.end(),
                       [&](const auto& c) { return c.dual() == dual; });
  }
};

/// The minimal members of `set` under the chosen reading.
inline std::vector<MultiplicativeCoevent> minimal_elements(
    const std::vector<MultiplicativeCoevent>& set, Minimality mode) {
  std::vector<MultiplicativeCoevent> out;
  for (const auto& phi : set) {
    bool minimal = true;
    for (const auto& psi : set) {
      if (psi == phi) continue;
      const bool beaten = mode == Minimality::Primitive
                              ? psi.dual().subset_of(phi.dual())  // ψ* ⊊ φ*
                              : dominates(psi, phi);
      if (beaten) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(phi);
  }
  return out;
}

/// All preclusive multiplicative coevents, ascending by dual.
template <class Field>
std::vector<MultiplicativeCoevent> preclusive_multiplicative(const HistoriesTheory<Field>& theory) {
  std::vector<MultiplicativeCoevent> out;
  const int n = theory.size();
  for (Event::mask_type m = 1; m <= theory.omega().bits(); ++m) {
    MultiplicativeCoevent phi(n, Event(m));
    if (is_preclusive(theory, phi)) out.push_back(phi);
  }
  return out;
}

/// M(H): the minimal preclusive multiplicative coevents.
template <class Field>
SchemeResult multiplicative_scheme(const HistoriesTheory<Field>& theory,
                                   Minimality mode = Minimality::Primitive) {
  return {"M", mode, std::nullopt, minimal_elements(preclusive_multiplicative(theory), mode)};
}

/// M_PC: preclusive multiplicative coevents classical on every Λ in B_D.
template <class Field>
std::vector<MultiplicativeCoevent> m_pc(const HistoriesTheory<Field>& theory,
                                        const GrainingPoset& poset) {
  const PosetTag bd = sub_poset(poset, PosetTagName::D);
  std::vector<MultiplicativeCoevent> out;
  for (const auto& phi : preclusive_multiplicative(theory)) {
    const bool classical = std::all_of(bd.members.begin(), bd.members.end(), [&](std::size_t i) {
      return is_classical_on(phi, poset.at(i));
    });
    if (classical) out.push_back(phi);
  }
  return out;
}

/// Cons_M: the minimal elements of M_PC. May be empty.
template <class Field>
SchemeResult cons_m(const HistoriesTheory<Field>& theory, const GrainingPoset& poset,
                    Minimality mode = Minimality::Primitive) {
  return {"Cons_M", mode, std::nullopt, minimal_elements(m_pc(theory, poset), mode)};
}

namespace detail {

template <class Field>
SchemeResult consistent_scheme(const HistoriesTheory<Field>& theory, const GrainingPoset& poset,
                               Reading reading, bool preclusive) {
  const int n = theory.size();
  SchemeResult out{preclusive ? "Cons_C" : "Cons_D", std::nullopt, reading, {}};
  const PosetTag bd = sub_poset(poset, PosetTagName::D);
  for (Event::mask_type m = 1; m <= theory.omega().bits(); ++m) {
    const Event a(m);
    auto qualifies = [&](const Partition& p) {
      return !preclusive || is_preclusive_hom(theory, HomValuation(p, a));
    };
    bool member = false;
    if (reading == Reading::Literal) {
      const auto idx = poset.index_of(Partition::isolating(n, a));
      member = idx && bd.contains(*idx) && qualifies(poset.at(*idx));
    } else {
      for (auto i : bd.members)
        if (poset.at(i).has_block(a) && qualifies(poset.at(i))) {
          member = true;
          break;
        }
    }
    if (member) out.coevents.emplace_back(n, a);
  }
  return out;
}

}  // namespace detail

/// Cons_D: A* such that φ_Λ^A ∈ V_D for a Λ meeting the support condition.
template <class Field>
SchemeResult cons_d(const HistoriesTheory<Field>& theory, const GrainingPoset& poset,
                    Reading reading = Reading::Literal) {
  return detail::consistent_scheme(theory, poset, reading, false);
}

/// Cons_C: as Cons_D but drawing φ_Λ^A from V_C.
template <class Field>
SchemeResult cons_c(const HistoriesTheory<Field>& theory, const GrainingPoset& poset,
                    Reading reading = Reading::Literal) {
  return detail::consistent_scheme(theory, poset, reading, true);
}

/// For each coevent, whether it is classical on each member of B_D.
inline std::vector<std::vector<bool>> classicality_table(const SchemeResult& result,
                                                         const GrainingPoset& poset) {
  const PosetTag bd = sub_poset(poset, PosetTagName::D);
  std::vector<std::vector<bool>> table;
  for (const auto& phi : result.coevents) {
    std::vector<bool> row;
    for (auto i : bd.members) row.push_back(is_classical_on(phi, poset.at(i)));
    table.push_back(std::move(row));
  }
  return table;
}

}  // namespace qmt
