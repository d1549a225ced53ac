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

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>

#include "qmt/error.hpp"

namespace qmt {

/// Complex numbers over an arbitrary ordered field. std::complex is only
/// specified for floating-point types, so exact mode needs its own.
template <class Real>
struct Complex {
  Real re{0};
  Real im{0};

  Complex() = default;
  Complex(Real r, Real i = Real(0)) : re(std::move(r)), im(std::move(i)) {}

  Complex conj() const { return {re, -im}; }
  Real norm() const { return re * re + im * im; }

  friend Complex operator+(const Complex& a, const Complex& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend Complex operator-(const Complex& a, const Complex& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend Complex operator*(const Complex& a, const Complex& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  Complex& operator+=(const Complex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
};

/// Exact arithmetic: GMP rationals, zero tests are exact.
struct ExactField {
  using real_type = mpq_class;
  static constexpr std::string_view name = "exact";

  bool is_zero(const mpq_class& x) const { return sgn(x) == 0; }
  bool equal(const mpq_class& a, const mpq_class& b) const { return a == b; }
  bool is_negative(const mpq_class& x) const { return sgn(x) < 0; }
  bool is_positive(const mpq_class& x) const { return sgn(x) > 0; }

  /// Accepts "p/q" or an integer, optionally signed. Decimals are rejected:
  /// exact inputs must be written as fractions.
  static mpq_class parse(std::string_view text) {
    std::string s(text);
    if (s.empty()) throw Error(ErrorCode::Schema, "empty rational string");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    bool slash = false, digits_before = false, digits_after = false;
    for (; i < s.size(); ++i) {
      const char c = s[i];
      if (c == '/' && !slash) {
        slash = true;
      } else if (c >= '0' && c <= '9') {
        (slash ? digits_after : digits_before) = true;
      } else {
        throw Error(ErrorCode::Schema, "'" + s + "' is not a rational of the form p/q");
      }
    }
    if (!digits_before || (slash && !digits_after))
      throw Error(ErrorCode::Schema, "'" + s + "' is not a rational of the form p/q");
    if (s[0] == '+') s.erase(0, 1);
    mpq_class q;
    try {
      q.set_str(s, 10);
    } catch (const std::invalid_argument&) {
      throw Error(ErrorCode::Schema, "'" + s + "' is not a rational of the form p/q");
    }
    if (q.get_den() == 0) throw Error(ErrorCode::Schema, "zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  static std::string format(const mpq_class& x) { return x.get_str(); }
  static double approx(const mpq_class& x) { return x.get_d(); }
};

/// Double precision; every zero or equality test is |x| <= tolerance.
struct FloatField {
  using real_type = double;
  static constexpr std::string_view name = "float";
  static constexpr double kDefaultTolerance = 1e-9;

  double tolerance = kDefaultTolerance;

  bool is_zero(double x) const { return std::fabs(x) <= tolerance; }
  bool equal(double a, double b) const { return std::fabs(a - b) <= tolerance; }
  bool is_negative(double x) const { return x < -tolerance; }
  bool is_positive(double x) const { return x > tolerance; }

  /// Accepts decimal notation and "p/q" fractions.
  static double parse(std::string_view text) {
    const auto slash = text.find('/');
    if (slash != std::string_view::npos) {
      return parse(text.substr(0, slash)) / parse(text.substr(slash + 1));
    }
    double value = 0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || first == last)
      throw Error(ErrorCode::Schema, "'" + std::string(text) + "' is not a number");
    return value;
  }

  static std::string format(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }
  static double approx(double x) { return x; }
};

}  // namespace qmt
