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

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "qmt/generators.hpp"
#include "qmt/qmt.hpp"

namespace qmt::test {

using C = Complex<mpq_class>;

inline ExactTheory three_path() {
  const std::vector<C> v{C(1), C(1), C(-1)};
  return from_amplitudes<ExactField>(SampleSpace({"a", "b", "c"}), v);
}

inline ExactTheory coin() {
  DecoherenceMatrix<ExactField> m(4);
  for (int i = 0; i < 4; ++i) m.at(i, i) = C(mpq_class(1, 4));
  return new_theory(SampleSpace({"hh", "ht", "th", "tt"}), m);
}

inline ExactTheory single() {
  const std::vector<C> v{C(1)};
  return from_amplitudes<ExactField>(SampleSpace({"a"}), v);
}

inline Event ev(const ExactTheory& t, const std::vector<std::string>& labels) {
  return t.space().event(labels);
}

inline Partition part(const ExactTheory& t, const std::string& text) {
  return parse_partition(t.space(), text);
}

inline std::vector<Event> duals(const SchemeResult& r) {
  std::vector<Event> out;
  for (const auto& c : r.coevents) out.push_back(c.dual());
  return out;
}

// |Σ_{i∈A} v_i|² straight from the amplitudes.
inline mpq_class amplitude_mu(const std::vector<long>& v, Event a) {
  mpq_class s = 0;
  for (int i : a.members()) s += v[static_cast<std::size_t>(i)];
  return s * s;
}

template <class F>
void expect_error(ErrorCode code, F&& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

// Seeded suites shared by the property tests.
inline std::vector<ExactTheory> quantum_suite(std::size_t count, int max_n, std::uint64_t seed = 1) {
  std::vector<ExactTheory> out;
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(random_quantum_theory(seed + i, 1 + static_cast<int>(i % static_cast<std::size_t>(max_n))));
  return out;
}

}  // namespace qmt::test
