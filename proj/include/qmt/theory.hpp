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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmt/error.hpp"
#include "qmt/event.hpp"
#include "qmt/scalar.hpp"

namespace qmt {

/// The decoherence functional on singletons: entry (a, b) is D({a},{b}).
/// D extends bilinearly, D(A,B) = sum over a in A, b in B of entry(a, b).
template <class Field>
class DecoherenceMatrix {
 public:
  using real_type = typename Field::real_type;
  using complex_type = Complex<real_type>;

  DecoherenceMatrix() = default;
  explicit DecoherenceMatrix(int n)
      : n_(n), entries_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {}

  /// Builds from row-major real and imaginary parts; `im` may be empty.
  static DecoherenceMatrix from_parts(const std::vector<std::vector<real_type>>& re,
                                      const std::vector<std::vector<real_type>>& im) {
    const int n = static_cast<int>(re.size());
    DecoherenceMatrix m(n);
    if (!im.empty() && im.size() != re.size())
      throw Error(ErrorCode::DimensionMismatch, "real and imaginary parts differ in size");
    for (int a = 0; a < n; ++a) {
      const auto ua = static_cast<std::size_t>(a);
      if (static_cast<int>(re[ua].size()) != n || (!im.empty() && static_cast<int>(im[ua].size()) != n))
        throw Error(ErrorCode::DimensionMismatch, "decoherence matrix is not square");
      for (int b = 0; b < n; ++b) {
        const auto ub = static_cast<std::size_t>(b);
        m.at(a, b) = complex_type(re[ua][ub], im.empty() ? real_type(0) : im[ua][ub]);
      }
    }
    return m;
  }

  /// The rank-one functional entry(a, b) = v_a * conj(v_b).
  static DecoherenceMatrix rank_one(std::span<const complex_type> v) {
    const int n = static_cast<int>(v.size());
    DecoherenceMatrix m(n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        m.at(a, b) = v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(b)].conj();
    return m;
  }

  int size() const { return n_; }
  complex_type& at(int a, int b) { return entries_[index(a, b)]; }
  const complex_type& at(int a, int b) const { return entries_[index(a, b)]; }

  /// D(A, B) by the bilinear double sum.
  complex_type functional(Event a, Event b) const {
    complex_type sum;
    for (int i : a.members())
      for (int j : b.members()) sum += at(i, j);
    return sum;
  }

 private:
  std::size_t index(int a, int b) const {
    return static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b);
  }

  int n_ = 0;
  std::vector<complex_type> entries_;
};

struct EventTriple {
  Event a, b, c;
  friend bool operator==(const EventTriple&, const EventTriple&) = default;
};

/// Pairwise-disjoint nonempty triples A < B < C (numeric order) violating
/// μ(A⊔B⊔C) = μ(A⊔B) + μ(B⊔C) + μ(C⊔A) − μ(A) − μ(B) − μ(C).
/// `mu` is a table indexed by event mask over an n-element space.
template <class Field>
std::vector<EventTriple> quantum_sum_rule_violations(
    std::span<const typename Field::real_type> mu, int n, const Field& field = {}) {
  std::vector<EventTriple> out;
  const Event omega = Event::full(n);
  for (Event::mask_type am = 1; am <= omega.bits(); ++am) {
    const Event a(am);
    const Event rest_a = a.complement(n);
    for_each_subset(rest_a, [&](Event b) {
      if (b <= a) return;
      const Event rest_ab = rest_a.minus(b);
      for_each_subset(rest_ab, [&](Event c) {
        if (c <= b) return;
        const auto& lhs = mu[(a | b | c).bits()];
        const typename Field::real_type rhs = mu[(a | b).bits()] + mu[(b | c).bits()] + mu[(c | a).bits()] -
                   mu[a.bits()] - mu[b.bits()] - mu[c.bits()];
        if (!field.equal(lhs, rhs)) out.push_back({a, b, c});
      });
    });
  }
  return out;
}

/// First disjoint pair (A, B) of `algebra` with μ(A⊔B) ≠ μ(A) + μ(B).
/// The algebra is trusted to be a Boolean sublattice.
template <class Field>
std::optional<std::pair<Event, Event>> kolmogorov_witness(
    std::span<const typename Field::real_type> mu, std::span<const Event> algebra,
    const Field& field = {}) {
  for (Event a : algebra)
    for (Event b : algebra) {
      if (a.intersects(b) || b < a) continue;
      typename Field::real_type sum = mu[a.bits()] + mu[b.bits()];
      if (!field.equal(mu[(a | b).bits()], sum)) return std::pair{a, b};
    }
  return std::nullopt;
}

/// Throws NotASublattice unless `algebra` contains ∅ and Ω and is closed
/// under union and complement.
inline void require_boolean_sublattice(std::span<const Event> algebra, int n) {
  std::vector<Event> sorted(algebra.begin(), algebra.end());
  std::sort(sorted.begin(), sorted.end());
  auto has = [&](Event e) { return std::binary_search(sorted.begin(), sorted.end(), e); };
  const Event omega = Event::full(n);
  if (!has(Event{}) || !has(omega))
    throw Error(ErrorCode::NotASublattice, "algebra must contain the empty event and Ω");
  for (Event a : sorted) {
    if (!a.subset_of(omega))
      throw Error(ErrorCode::NotASublattice, "event outside the sample space");
    if (!has(a.complement(n)))
      throw Error(ErrorCode::NotASublattice,
                  "not closed under complement at mask " + std::to_string(a.bits()));
    for (Event b : sorted)
      if (!has(a | b))
        throw Error(ErrorCode::NotASublattice, "not closed under union at masks " +
                                                   std::to_string(a.bits()) + ", " +
                                                   std::to_string(b.bits()));
  }
}

/// A finite histories theory H = (Ω, 2^Ω, μ) with μ(A) = D(A, A).
/// Immutable; μ is tabulated for all 2^n events at construction.
template <class Field>
class HistoriesTheory {
 public:
  using field_type = Field;
  using real_type = typename Field::real_type;
  using complex_type = Complex<real_type>;

  /// Validates the dimension, Hermiticity, unit total and μ ≥ 0 on every event.
  static HistoriesTheory create(SampleSpace space, DecoherenceMatrix<Field> matrix,
                                Field field = {}) {
    const int n = space.size();
    if (matrix.size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "matrix is " + std::to_string(matrix.size()) + "x" +
                      std::to_string(matrix.size()) + " but the space has " +
                      std::to_string(n) + " histories");
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        const auto& x = matrix.at(a, b);
        const auto y = matrix.at(b, a).conj();
        if (!field.equal(x.re, y.re) || !field.equal(x.im, y.im))
          throw Error(ErrorCode::NonHermitian, "D({" + space.label(a) + "},{" +
                                                   space.label(b) +
                                                   "}) is not the conjugate of its transpose");
      }

    HistoriesTheory t;
    t.space_ = std::move(space);
    t.matrix_ = std::move(matrix);
    t.field_ = field;
    t.tabulate();

    const Event omega = t.space_.omega();
    if (!field.equal(t.mu_[omega.bits()], real_type(1)))
      throw Error(ErrorCode::NotUnitTotal,
                  "D(Ω,Ω) = " + Field::format(t.mu_[omega.bits()]) + ", expected 1");
    for (Event::mask_type m = 0; m <= omega.bits(); ++m)
      if (field.is_negative(t.mu_[m]))
        throw Error(ErrorCode::NegativeMeasure,
                    "μ(" + t.space_.format(Event(m)) + ") = " + Field::format(t.mu_[m]) + " < 0");
    t.classify_nulls();
    return t;
  }

  const SampleSpace& space() const { return space_; }
  int size() const { return space_.size(); }
  Event omega() const { return space_.omega(); }
  const DecoherenceMatrix<Field>& matrix() const { return matrix_; }
  const Field& field() const { return field_; }

  const real_type& mu(Event a) const {
    space_.require_owned(a);
    return mu_[a.bits()];
  }
  /// The whole μ table indexed by event mask.
  std::span<const real_type> mu_table() const { return mu_; }

  bool is_null(Event a) const {
    space_.require_owned(a);
    return null_flags_[a.bits()];
  }

  /// All events of measure zero, ascending; always starts with ∅.
  const std::vector<Event>& null_events() const { return nulls_; }

  /// μ(A⊔B) = μ(A) + μ(B) for disjoint A, B.
  bool additive(Event a, Event b) const {
    real_type sum = mu(a) + mu(b);
    return field_.equal(mu(a | b), sum);
  }

 private:
  HistoriesTheory() = default;

  // μ(A) = μ(A∖{x}) + D(x,x) + 2 Re Σ_{b ∈ A∖{x}} D(x,b), x the lowest member.
  void tabulate() {
    const auto count = std::size_t{1} << space_.size();
    mu_.assign(count, real_type(0));
    for (std::size_t m = 1; m < count; ++m) {
      const Event a(static_cast<Event::mask_type>(m));
      const int x = a.lowest();
      const Event rest = a.minus(Event::singleton(x));
      real_type cross(0);
      for (int b : rest.members()) cross += matrix_.at(x, b).re;
      mu_[m] = mu_[rest.bits()] + matrix_.at(x, x).re + real_type(2 * cross);
    }
  }

  void classify_nulls() {
    null_flags_.assign(mu_.size(), false);
    for (std::size_t m = 0; m < mu_.size(); ++m)
      if (field_.is_zero(mu_[m])) {
        null_flags_[m] = true;
        nulls_.push_back(Event(static_cast<Event::mask_type>(m)));
      }
  }

  SampleSpace space_;
  DecoherenceMatrix<Field> matrix_;
  Field field_{};
  std::vector<real_type> mu_;
  std::vector<bool> null_flags_;
  std::vector<Event> nulls_;
};

using ExactTheory = HistoriesTheory<ExactField>;
using FloatTheory = HistoriesTheory<FloatField>;

template <class Field>
HistoriesTheory<Field> new_theory(SampleSpace space, DecoherenceMatrix<Field> matrix,
                                  Field field = {}) {
  return HistoriesTheory<Field>::create(std::move(space), std::move(matrix), field);
}

/// Rank-one theory from amplitudes; requires |Σ v|² = 1.
template <class Field>
HistoriesTheory<Field> from_amplitudes(SampleSpace space,
                                       std::span<const Complex<typename Field::real_type>> v,
                                       Field field = {}) {
  using real_type = typename Field::real_type;
  if (static_cast<int>(v.size()) != space.size())
    throw Error(ErrorCode::DimensionMismatch,
                std::to_string(v.size()) + " amplitudes for " + std::to_string(space.size()) +
                    " histories");
  Complex<real_type> total;
  for (const auto& z : v) total += z;
  if (!field.equal(total.norm(), real_type(1)))
    throw Error(ErrorCode::NotNormalized,
                "|Σ v|² = " + Field::format(total.norm()) + ", expected 1");
  return HistoriesTheory<Field>::create(std::move(space), DecoherenceMatrix<Field>::rank_one(v),
                                        field);
}

template <class Field>
const typename Field::real_type& mu(const HistoriesTheory<Field>& theory, Event a) {
  return theory.mu(a);
}

template <class Field>
const std::vector<Event>& null_events(const HistoriesTheory<Field>& theory) {
  return theory.null_events();
}

/// Kolmogorov sum rule over all of 2^Ω, or over `algebra` when given.
template <class Field>
bool kolmogorov_holds(const HistoriesTheory<Field>& theory,
                      std::optional<std::span<const Event>> algebra = std::nullopt) {
  if (algebra) {
    require_boolean_sublattice(*algebra, theory.size());
    return !kolmogorov_witness(theory.mu_table(), *algebra, theory.field());
  }
  // Over the full algebra enumerate disjoint pairs directly.
  const Event omega = theory.omega();
  for (Event::mask_type am = 1; am <= omega.bits(); ++am) {
    const Event a(am);
    bool ok = true;
    for_each_subset(a.complement(theory.size()), [&](Event b) {
      if (ok && !b.empty() && a < b && !theory.additive(a, b)) ok = false;
    });
    if (!ok) return false;
  }
  return true;
}

template <class Field>
std::vector<EventTriple> quantum_sum_rule_check(const HistoriesTheory<Field>& theory) {
  return quantum_sum_rule_violations(theory.mu_table(), theory.size(), theory.field());
}

/// Diagnostic only: whether the matrix is positive semidefinite, by
/// Hermitian elimination (exact in exact mode).
template <class Field>
bool is_positive_semidefinite(const DecoherenceMatrix<Field>& matrix, const Field& field = {}) {
  using real_type = typename Field::real_type;
  using complex_type = Complex<real_type>;
  const int n = matrix.size();
  std::vector<std::vector<complex_type>> m(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m[static_cast<std::size_t>(a)].push_back(matrix.at(a, b));
  auto at = [&](int a, int b) -> complex_type& {
    return m[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
  };
  for (int k = 0; k < n; ++k) {
    const real_type pivot = at(k, k).re;
    if (field.is_negative(pivot)) return false;
    if (field.is_zero(pivot)) {
      for (int j = k + 1; j < n; ++j)
        if (!field.is_zero(at(k, j).re) || !field.is_zero(at(k, j).im)) return false;
      continue;
    }
    for (int i = k + 1; i < n; ++i) {
      const complex_type factor = at(i, k);
      for (int j = k + 1; j < n; ++j) {
        complex_type prod = factor * at(k, j);
        at(i, j) = at(i, j) - complex_type(real_type(prod.re / pivot), real_type(prod.im / pivot));
      }
    }
  }
  return true;
}

}  // namespace qmt
