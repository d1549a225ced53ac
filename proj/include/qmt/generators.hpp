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

#include <cstdint>
#include <random>
#include <vector>

#include "qmt/theory.hpp"

namespace qmt {

/// Seeded random theories for tests and the `examples random` command.
/// Draws use raw mt19937_64 output so that a seed gives the same theory
/// with every standard library.
class TheoryGenerator {
 public:
  explicit TheoryGenerator(std::uint64_t seed) : rng_(seed) {}

  /// A sum of one or two rank-one terms with small integer (optionally
  /// complex) amplitudes, scaled to unit total. Positive semidefinite by
  /// construction; small integers make null events common.
  DecoherenceMatrix<ExactField> quantum(int n) {
    using C = Complex<mpq_class>;
    while (true) {
      const int rank = 1 + static_cast<int>(draw(2));
      DecoherenceMatrix<ExactField> m(n);
      for (int k = 0; k < rank; ++k) {
        std::vector<C> v;
        const bool complex = draw(2) == 0;
        for (int i = 0; i < n; ++i)
          v.emplace_back(mpq_class(small()), mpq_class(complex ? small() : 0));
        const auto term = DecoherenceMatrix<ExactField>::rank_one(v);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) m.at(a, b) += term.at(a, b);
      }
      const mpq_class total = m.functional(Event::full(n), Event::full(n)).re;
      if (sgn(total) == 0) continue;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          m.at(a, b).re /= total;
          m.at(a, b).im /= total;
        }
      return m;
    }
  }

  /// A diagonal (classical) matrix with weights in {0, ..., 4}, normalized.
  DecoherenceMatrix<ExactField> probability(int n) {
    while (true) {
      std::vector<mpq_class> w;
      mpq_class total = 0;
      for (int i = 0; i < n; ++i) {
        w.emplace_back(static_cast<long>(draw(5)));
        total += w.back();
      }
      if (sgn(total) == 0) continue;
      DecoherenceMatrix<ExactField> m(n);
      for (int i = 0; i < n; ++i) m.at(i, i) = Complex<mpq_class>(mpq_class(w[static_cast<std::size_t>(i)] / total));
      return m;
    }
  }

 private:
  std::uint64_t draw(std::uint64_t k) { return rng_() % k; }
  long small() { return static_cast<long>(draw(5)) - 2; }

  std::mt19937_64 rng_;
};

inline ExactTheory random_quantum_theory(std::uint64_t seed, int n) {
  TheoryGenerator g(seed);
  return ExactTheory::create(SampleSpace::indexed(n), g.quantum(n));
}

inline ExactTheory random_probability_theory(std::uint64_t seed, int n) {
  TheoryGenerator g(seed);
  return ExactTheory::create(SampleSpace::indexed(n), g.probability(n));
}

}  // namespace qmt
