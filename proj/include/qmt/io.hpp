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

#include <openssl/evp.h>

#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "qmt/error.hpp"
#include "qmt/generators.hpp"
#include "qmt/grainings.hpp"
#include "qmt/theory.hpp"

namespace qmt::io {

using json = nlohmann::json;

enum class Mode { Exact, Float };

/// A partition written as blocks of history labels.
using PartitionSpec = std::vector<std::vector<std::string>>;

/// The on-disk theory description. Numbers are held as canonical strings
/// ("p/q" in exact mode, %.17g in float mode) so that re-emission is exact.
struct TheoryFile {
  std::vector<std::string> histories;
  Mode mode = Mode::Exact;
  bool amplitude_form = false;
  std::vector<std::vector<std::string>> re, im;  // decoherence form
  std::vector<std::string> amp_re, amp_im;       // amplitude form
  std::optional<std::vector<PartitionSpec>> observable, experiment;
  std::optional<int> cap;
  std::optional<double> tolerance;
};

using AnyTheory = std::variant<ExactTheory, FloatTheory>;

namespace detail {

inline std::string line_col(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline std::string canonical_number(const json& v, Mode mode, const std::string& path) {
  std::string text;
  if (v.is_string()) {
    text = v.get<std::string>();
  } else if (v.is_number_integer()) {
    text = std::to_string(v.get<long long>());
  } else if (v.is_number_float() && mode == Mode::Float) {
    return FloatField::format(v.get<double>());
  } else {
    throw Error(ErrorCode::Schema, path + ": expected a rational string");
  }
  try {
    return mode == Mode::Exact ? ExactField::format(ExactField::parse(text))
                               : FloatField::format(FloatField::parse(text));
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, path + ": " + e.detail());
  }
}

inline std::vector<std::string> number_row(const json& v, Mode mode, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorCode::Schema, path + ": expected an array");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(canonical_number(v[i], mode, path + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::vector<PartitionSpec> partition_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw Error(ErrorCode::Schema, path + ": expected a list of partitions");
  std::vector<PartitionSpec> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    if (!v[i].is_array()) throw Error(ErrorCode::Schema, p + ": expected a list of blocks");
    PartitionSpec spec;
    for (const auto& block : v[i]) {
      if (!block.is_array()) throw Error(ErrorCode::Schema, p + ": expected a block of labels");
      std::vector<std::string> labels;
      for (const auto& l : block) {
        if (!l.is_string()) throw Error(ErrorCode::Schema, p + ": labels are strings");
        labels.push_back(l.get<std::string>());
      }
      spec.push_back(std::move(labels));
    }
    out.push_back(std::move(spec));
  }
  return out;
}

}  // namespace detail

inline TheoryFile parse_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Syntax, detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0) + ": " +
                                       e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Schema, "top level must be an object");

  TheoryFile f;
  if (doc.contains("mode")) {
    const auto& m = doc["mode"];
    if (m == "exact") f.mode = Mode::Exact;
    else if (m == "float") f.mode = Mode::Float;
    else throw Error(ErrorCode::Schema, "mode: expected \"exact\" or \"float\"");
  }
  if (!doc.contains("histories") || !doc["histories"].is_array())
    throw Error(ErrorCode::Schema, "histories: expected a list of labels");
  for (const auto& h : doc["histories"]) {
    if (!h.is_string()) throw Error(ErrorCode::Schema, "histories: labels are strings");
    f.histories.push_back(h.get<std::string>());
  }

  const bool has_d = doc.contains("decoherence"), has_a = doc.contains("amplitudes");
  if (has_d == has_a)
    throw Error(ErrorCode::Schema, "exactly one of \"decoherence\" and \"amplitudes\" is required");
  if (has_d) {
    const auto& d = doc["decoherence"];
    if (!d.is_object() || !d.contains("re") || !d["re"].is_array() ||
        (d.contains("im") && !d["im"].is_array()))
      throw Error(ErrorCode::Schema, "decoherence: expected {\"re\": [[...]], \"im\": [[...]]}");
    for (std::size_t i = 0; i < d["re"].size(); ++i)
      f.re.push_back(detail::number_row(d["re"][i], f.mode, "decoherence.re[" + std::to_string(i) + "]"));
    if (d.contains("im"))
      for (std::size_t i = 0; i < d["im"].size(); ++i)
        f.im.push_back(detail::number_row(d["im"][i], f.mode, "decoherence.im[" + std::to_string(i) + "]"));
  } else {
    f.amplitude_form = true;
    const auto& a = doc["amplitudes"];
    if (!a.is_object() || !a.contains("re"))
      throw Error(ErrorCode::Schema, "amplitudes: expected {\"re\": [...], \"im\": [...]}");
    f.amp_re = detail::number_row(a["re"], f.mode, "amplitudes.re");
    if (a.contains("im")) f.amp_im = detail::number_row(a["im"], f.mode, "amplitudes.im");
  }

  if (doc.contains("designated")) {
    const auto& d = doc["designated"];
    if (!d.is_object()) throw Error(ErrorCode::Schema, "designated: expected an object");
    if (d.contains("O")) f.observable = detail::partition_list(d["O"], "designated.O");
    if (d.contains("E")) f.experiment = detail::partition_list(d["E"], "designated.E");
  }
  if (doc.contains("cap")) {
    if (!doc["cap"].is_number_integer()) throw Error(ErrorCode::Schema, "cap: expected an integer");
    f.cap = doc["cap"].get<int>();
    if (*f.cap < 1 || *f.cap > kHardHistoryLimit)
      throw Error(ErrorCode::Schema, "cap: must lie in [1, " + std::to_string(kHardHistoryLimit) + "]");
  }
  if (doc.contains("tolerance")) {
    if (!doc["tolerance"].is_number()) throw Error(ErrorCode::Schema, "tolerance: expected a number");
    f.tolerance = doc["tolerance"].get<double>();
  }
  return f;
}

inline TheoryFile parse(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Syntax, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

/// Canonical JSON text: sorted keys, two-space indent, trailing newline.
inline std::string emit(const TheoryFile& f) {
  json doc;
  doc["histories"] = f.histories;
  doc["mode"] = f.mode == Mode::Exact ? "exact" : "float";
  const std::string zero = f.mode == Mode::Exact ? "0" : FloatField::format(0.0);
  if (f.amplitude_form) {
    auto im = f.amp_im.empty() ? std::vector<std::string>(f.amp_re.size(), zero) : f.amp_im;
    doc["amplitudes"] = {{"re", f.amp_re}, {"im", im}};
  } else {
    auto im = f.im;
    if (im.empty())
      for (const auto& row : f.re) im.emplace_back(row.size(), zero);
    doc["decoherence"] = {{"re", f.re}, {"im", im}};
  }
  if (f.observable || f.experiment) {
    json d = json::object();
    if (f.observable) d["O"] = *f.observable;
    if (f.experiment) d["E"] = *f.experiment;
    doc["designated"] = d;
  }
  if (f.cap) doc["cap"] = *f.cap;
  if (f.tolerance) doc["tolerance"] = *f.tolerance;
  return doc.dump(2) + "\n";
}

/// SHA-256 of the canonical emission, hex encoded.
inline std::string fingerprint(const TheoryFile& f) {
  const std::string text = emit(f);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i)
    os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  return os.str();
}

inline int effective_cap(const TheoryFile& f) { return f.cap ? *f.cap : history_cap(); }

namespace detail {

template <class Field>
HistoriesTheory<Field> build(const TheoryFile& f, Field field) {
  using real_type = typename Field::real_type;
  SampleSpace space(f.histories, effective_cap(f));
  auto num = [](const std::string& s) { return real_type(Field::parse(s)); };
  if (f.amplitude_form) {
    if (!f.amp_im.empty() && f.amp_im.size() != f.amp_re.size())
      throw Error(ErrorCode::DimensionMismatch, "amplitude real and imaginary parts differ in length");
    std::vector<Complex<real_type>> v;
    for (std::size_t i = 0; i < f.amp_re.size(); ++i)
      v.emplace_back(num(f.amp_re[i]), f.amp_im.empty() ? real_type(0) : num(f.amp_im[i]));
    return from_amplitudes<Field>(std::move(space), v, field);
  }
  std::vector<std::vector<real_type>> re, im;
  for (const auto& row : f.re) {
    re.emplace_back();
    for (const auto& s : row) re.back().push_back(num(s));
  }
  for (const auto& row : f.im) {
    im.emplace_back();
    for (const auto& s : row) im.back().push_back(num(s));
  }
  return HistoriesTheory<Field>::create(std::move(space),
                                        DecoherenceMatrix<Field>::from_parts(re, im), field);
}

}  // namespace detail

/// Validates the theory axioms; measure-core errors propagate unchanged.
inline AnyTheory build_theory(const TheoryFile& f) {
  if (f.mode == Mode::Exact) return detail::build(f, ExactField{});
  FloatField field;
  if (f.tolerance) field.tolerance = *f.tolerance;
  return detail::build(f, field);
}

inline Partition to_partition(const SampleSpace& space, const PartitionSpec& spec) {
  std::vector<Event> blocks;
  for (const auto& block : spec) blocks.push_back(space.event(block));
  return Partition::from_blocks(space.size(), std::move(blocks));
}

/// Marks the file's designated O / E posets on B, validating upper closure.
inline void apply_designations(const TheoryFile& f, const SampleSpace& space, GrainingPoset& poset) {
  auto apply = [&](const std::vector<PartitionSpec>& specs, PosetTagName tag) {
    std::vector<std::size_t> members;
    for (const auto& spec : specs) members.push_back(poset.require_index(to_partition(space, spec)));
    designate_upper(poset, std::move(members), tag);
  };
  if (f.observable) apply(*f.observable, PosetTagName::O);
  if (f.experiment) apply(*f.experiment, PosetTagName::E);
}

// ---------------------------------------------------------------------------
// Built-in example theories.

inline TheoryFile coin_example() {
  TheoryFile f;
  f.histories = {"hh", "ht", "th", "tt"};
  for (int a = 0; a < 4; ++a) {
    f.re.emplace_back(4, "0");
    f.im.emplace_back(4, "0");
    f.re.back()[static_cast<std::size_t>(a)] = "1/4";
  }
  return f;
}

inline TheoryFile three_path_example() {
  TheoryFile f;
  f.histories = {"a", "b", "c"};
  f.amplitude_form = true;
  f.amp_re = {"1", "1", "-1"};
  f.amp_im = {"0", "0", "0"};
  return f;
}

inline TheoryFile single_example() {
  TheoryFile f;
  f.histories = {"a"};
  f.amplitude_form = true;
  f.amp_re = {"1"};
  f.amp_im = {"0"};
  return f;
}

inline TheoryFile from_matrix(const SampleSpace& space, const DecoherenceMatrix<ExactField>& m) {
  TheoryFile f;
  f.histories = space.labels();
  for (int a = 0; a < m.size(); ++a) {
    f.re.emplace_back();
    f.im.emplace_back();
    for (int b = 0; b < m.size(); ++b) {
      f.re.back().push_back(ExactField::format(m.at(a, b).re));
      f.im.back().push_back(ExactField::format(m.at(a, b).im));
    }
  }
  return f;
}

inline TheoryFile random_example(std::uint64_t seed, int n) {
  TheoryGenerator g(seed);
  return from_matrix(SampleSpace::indexed(n, kHardHistoryLimit), g.quantum(n));
}

inline TheoryFile example(const std::string& name, std::uint64_t seed = 0, int n = 4) {
  if (name == "coin") return coin_example();
  if (name == "three-path") return three_path_example();
  if (name == "single") return single_example();
  if (name == "random") return random_example(seed, n);
  throw Error(ErrorCode::UnknownExample, "no example named '" + name + "'");
}

}  // namespace qmt::io
