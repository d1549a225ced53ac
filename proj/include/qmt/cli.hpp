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

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qmt/constructions.hpp"
#include "qmt/differential.hpp"
#include "qmt/io.hpp"
#include "qmt/qmt.hpp"

namespace qmt::cli {

using json = nlohmann::json;

enum ExitCode : int { kOk = 0, kInputError = 1, kInternalError = 2 };

/// The result of one command. Serialization is deterministic: identical
/// inputs and flags give identical bytes.
struct Report {
  std::string command;
  json flags = json::object();
  std::string fingerprint;
  json result = json::object();
  std::vector<std::string> diagnostics;
  std::ostringstream text;
  int exit_code = kOk;

  json to_json() const {
    json j;
    j["command"] = command;
    j["flags"] = flags;
    j["fingerprint"] = fingerprint;
    j["result"] = result;
    j["diagnostics"] = diagnostics;
    j["exit_code"] = exit_code;
    return j;
  }
};

struct Options {
  std::string command;
  std::string theory_path;
  bool json_output = false;
  // partitions
  std::string tag;
  std::string dot_path;
  // coevents
  std::string scheme = "m";
  std::string mode = "primitive";
  std::string reading = "literal";
  // valuations
  std::string set = "vd";
  std::string partition;
  // topos
  std::string poset = "bd";
  std::string subobject = "literal";
  std::string construction = "valuations";
  // oracle
  std::string check = "all";
  int random_count = 0;
  std::uint64_t seed = 1;
  int max_n = 5;
  // examples
  std::string example;
  int n = 4;
  std::string output_path;
};

namespace detail {

inline PosetTagName parse_poset_name(const std::string& s) {
  if (s == "b") return PosetTagName::B;
  if (s == "bd" || s == "d") return PosetTagName::D;
  if (s == "bp" || s == "p") return PosetTagName::P;
  if (s == "bpd" || s == "pd") return PosetTagName::PD;
  if (s == "bo" || s == "o") return PosetTagName::O;
  if (s == "be" || s == "e") return PosetTagName::E;
  throw Error(ErrorCode::Schema, "unknown poset '" + s + "'");
}

inline std::string format_dual(const SampleSpace& space, const MultiplicativeCoevent& c) {
  return space.format(c.dual()) + "*";
}

template <class Field>
GrainingPoset poset_for(const io::TheoryFile& file, const HistoriesTheory<Field>& theory) {
  GrainingPoset poset = build_poset(theory, io::effective_cap(file));
  io::apply_designations(file, theory.space(), poset);
  return poset;
}

inline PosetTag require_tag(const GrainingPoset& poset, PosetTagName name) {
  if ((name == PosetTagName::O || name == PosetTagName::E) && !poset.has_designation(name))
    throw Error(ErrorCode::Schema, "the theory file designates no B_" + to_string(name) + " poset");
  return sub_poset(poset, name);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Syntax, "cannot write " + path);
  out << content;
}

template <class Field>
void float_notice(const HistoriesTheory<Field>& theory, Report& r) {
  if constexpr (std::is_same_v<Field, FloatField>)
    r.diagnostics.push_back("float mode: zero and equality tests use tolerance " +
                            FloatField::format(theory.field().tolerance));
}

// ---------------------------------------------------------------------------

template <class Field>
void check(const io::TheoryFile&, const HistoriesTheory<Field>& t, const Options&, Report& r) {
  const auto& space = t.space();
  json mu = json::array();
  for (Event::mask_type m = 0; m <= t.omega().bits(); ++m)
    mu.push_back({{"event", space.format(Event(m))}, {"value", Field::format(t.mu(Event(m)))}});
  json nulls = json::array();
  for (Event z : t.null_events()) nulls.push_back(space.format(z));
  const bool kolmogorov = kolmogorov_holds(t);
  const auto violations = quantum_sum_rule_check(t);
  const bool psd = is_positive_semidefinite(t.matrix(), t.field());
  json sample = json::array();
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i)
    sample.push_back({space.format(violations[i].a), space.format(violations[i].b),
                      space.format(violations[i].c)});

  r.result = {{"histories", space.labels()},
              {"mode", std::string(Field::name)},
              {"mu", mu},
              {"null_events", nulls},
              {"kolmogorov", kolmogorov},
              {"quantum_sum_rule", {{"holds", violations.empty()},
                                    {"violations", violations.size()},
                                    {"examples", sample}}},
              {"positive_semidefinite", psd}};
  if (!psd) r.diagnostics.push_back("decoherence matrix is not positive semidefinite (diagnostic only)");
  if (!violations.empty()) r.exit_code = kInternalError;

  r.text << "histories: " << space.size() << " (" << Field::name << " mode)\n";
  r.text << "null events: ";
  for (Event z : t.null_events()) r.text << space.format(z) << ' ';
  r.text << "\nkolmogorov=" << (kolmogorov ? "true" : "false")
         << " quantum_sum_rule=" << (violations.empty() ? "holds" : "VIOLATED")
         << " psd=" << (psd ? "true" : "false") << "\n";
}

template <class Field>
void partitions(const io::TheoryFile& file, const HistoriesTheory<Field>& t, const Options& o,
                Report& r) {
  const auto& space = t.space();
  const GrainingPoset poset = poset_for(file, t);
  std::optional<PosetTag> filter;
  if (!o.tag.empty()) filter = require_tag(poset, parse_poset_name(o.tag));
  json rows = json::array();
  for (std::size_t i = 0; i < poset.size(); ++i) {
    if (filter && !filter->contains(i)) continue;
    const bool d = poset.has(i, GrainingPoset::kDecoherent);
    const bool p = poset.has(i, GrainingPoset::kSeparable);
    json row = {{"index", i},
                {"partition", format_partition(space, poset.at(i))},
                {"decoherent", d},
                {"separable", p},
                {"pd", d && p}};
    if (poset.has_designation(PosetTagName::O)) row["observable"] = poset.has(i, GrainingPoset::kObservable);
    if (poset.has_designation(PosetTagName::E)) row["experiment"] = poset.has(i, GrainingPoset::kExperiment);
    rows.push_back(row);
    r.text << format_partition(space, poset.at(i)) << (d ? "  D" : "") << (p ? "  P" : "") << "\n";
  }
  r.result = {{"partitions", rows},
              {"count", poset.size()},
              {"B_D", sub_poset(poset, PosetTagName::D).size()},
              {"B_P", sub_poset(poset, PosetTagName::P).size()},
              {"B_PD", sub_poset(poset, PosetTagName::PD).size()}};
  if (!o.dot_path.empty()) write_file(o.dot_path, poset_dot(space, poset));
  r.text << poset.size() << " partitions; |B_D|=" << r.result["B_D"] << " |B_P|=" << r.result["B_P"]
         << " |B_PD|=" << r.result["B_PD"] << "\n";
}

template <class Field>
void coevents(const io::TheoryFile& file, const HistoriesTheory<Field>& t, const Options& o,
              Report& r) {
  const auto& space = t.space();
  const GrainingPoset poset = poset_for(file, t);
  if (o.mode != "primitive" && o.mode != "literal")
    throw Error(ErrorCode::Schema, "--mode must be primitive or literal");
  if (o.reading != "literal" && o.reading != "loose")
    throw Error(ErrorCode::Schema, "--reading must be literal or loose");
  const Minimality mode = o.mode == "primitive" ? Minimality::Primitive : Minimality::Literal;
  const Reading reading = o.reading == "literal" ? Reading::Literal : Reading::Loose;

  SchemeResult result;
  if (o.scheme == "m") result = multiplicative_scheme(t, mode);
  else if (o.scheme == "cons-d") result = cons_d(t, poset, reading);
  else if (o.scheme == "cons-c") result = cons_c(t, poset, reading);
  else if (o.scheme == "cons-m") result = cons_m(t, poset, mode);
  else throw Error(ErrorCode::Schema, "--scheme must be m, cons-d, cons-c or cons-m");

  const PosetTag bd = sub_poset(poset, PosetTagName::D);
  json bd_names = json::array();
  for (auto i : bd.members) bd_names.push_back(format_partition(space, poset.at(i)));
  const auto table = classicality_table(result, poset);
  json rows = json::array();
  r.text << result.scheme;
  if (result.minimality) r.text << " (" << to_string(*result.minimality) << " minimality)";
  if (result.reading) r.text << " (" << to_string(*result.reading) << " reading)";
  r.text << ":";
  for (std::size_t k = 0; k < result.coevents.size(); ++k) {
    const auto& c = result.coevents[k];
    json classical = json::object();
    for (std::size_t j = 0; j < bd.members.size(); ++j) classical[bd_names[j].get<std::string>()] = table[k][j];
    rows.push_back({{"dual", space.format(c.dual())},
                    {"preclusive", is_preclusive(t, c)},
                    {"classical_on_B_D", classical}});
    r.text << ' ' << format_dual(space, c);
  }
  r.text << (result.empty() ? " (empty)" : "") << "\n";
  r.result = {{"scheme", result.scheme}, {"coevents", rows}, {"B_D", bd_names}, {"empty", result.empty()}};
  if (result.minimality) r.result["minimality"] = to_string(*result.minimality);
  if (result.reading) r.result["reading"] = to_string(*result.reading);
  if (o.scheme == "cons-m") {
    json pc = json::array();
    for (const auto& c : m_pc(t, poset)) pc.push_back(space.format(c.dual()));
    r.result["m_pc"] = pc;
  }
  if (result.empty()) r.diagnostics.push_back("scheme " + result.scheme + " is empty for this theory");
  if (mode == Minimality::Literal && (o.scheme == "m" || o.scheme == "cons-m"))
    r.diagnostics.push_back("literal minimality keeps coevents with inclusion-maximal duals");
}

template <class Field>
void valuations(const io::TheoryFile& file, const HistoriesTheory<Field>& t, const Options& o,
                Report& r) {
  const auto& space = t.space();
  const GrainingPoset poset = poset_for(file, t);
  ValuationKind kind;
  if (o.set == "vd") kind = ValuationKind::VD;
  else if (o.set == "vc") kind = ValuationKind::VC;
  else if (o.set == "vpd") kind = ValuationKind::VPD;
  else if (o.set == "vpd-c") kind = ValuationKind::VPDPreclusive;
  else throw Error(ErrorCode::Schema, "--set must be vd, vc, vpd or vpd-c");
  std::optional<Partition> only;
  if (!o.partition.empty()) only = parse_partition(space, o.partition);

  const LogicalFramework fw = logical_framework(t, poset, kind);
  json rows = json::array();
  for (const auto& v : fw.valuations.members) {
    if (only && !(v.partition() == *only)) continue;
    json table = json::array();
    for (const auto& [e, value] : v.truth_table())
      table.push_back({{"event", space.format(e)}, {"value", value ? 1 : 0}});
    const bool preclusive = is_preclusive_hom(t, v);
    rows.push_back({{"partition", format_partition(space, v.partition())},
                    {"block", space.format(v.block())},
                    {"preclusive", preclusive},
                    {"truth_table", table}});
    r.text << format_partition(space, v.partition()) << "  block " << space.format(v.block())
           << (preclusive ? "" : "  (precluded)") << "\n";
  }
  json domains = json::array();
  for (const auto& d : fw.domains) domains.push_back(format_partition(space, d.source));
  r.result = {{"set", to_string(kind)},
              {"domains", domains},
              {"truth_values", std::string(LogicalFramework::truth_values)},
              {"valuations", rows},
              {"count", rows.size()}};
  r.text << rows.size() << " valuations in " << to_string(kind) << "\n";
}

inline json upper_set_json(const PosetView& view, const SampleSpace& space, const ElementSet& u) {
  json out = json::array();
  for (auto i = u.find_first(); i != ElementSet::npos; i = u.find_next(i))
    out.push_back(format_partition(space, view.partition(i)));
  return out;
}

inline json algebra_json(const PosetView& view, const SampleSpace& space, const GeneratedAlgebra& g,
                         Report& r) {
  constexpr std::size_t kTableLimit = 64;
  json carrier = json::array();
  for (const auto& c : g.carrier()) carrier.push_back(upper_set_json(view, space, c));
  json out = {{"size", g.size()}, {"carrier", carrier}};
  if (g.size() <= kTableLimit) {
    json meet = json::array(), join = json::array(), implies = json::array();
    for (const auto& a : g.carrier()) {
      json mr = json::array(), jr = json::array(), ir = json::array();
      for (const auto& b : g.carrier()) {
        mr.push_back(g.index_of(g.meet(a, b)));
        jr.push_back(g.index_of(g.join(a, b)));
        ir.push_back(g.index_of(g.implies(a, b)));
      }
      meet.push_back(mr);
      join.push_back(jr);
      implies.push_back(ir);
    }
    out["meet"] = meet;
    out["join"] = join;
    out["implies"] = implies;
    json div = json::array();
    for (auto [a, b] : g.divergences()) div.push_back({a, b});
    out["ambient_implication_divergences"] = div;
    if (!div.empty())
      r.diagnostics.push_back("ambient implication leaves the generated algebra for " +
                              std::to_string(div.size()) + " pairs; carrier implication used");
    if (auto v = g.law_violation()) {
      r.diagnostics.push_back("generated algebra: " + *v);
      r.exit_code = kInternalError;
    }
  } else {
    r.diagnostics.push_back("operation tables omitted: carrier has " + std::to_string(g.size()) +
                            " elements");
  }
  return out;
}

template <class Field>
void topos(const io::TheoryFile& file, const HistoriesTheory<Field>& t, const Options& o, Report& r) {
  const auto& space = t.space();
  const GrainingPoset poset = poset_for(file, t);
  const PosetTag tag = require_tag(poset, parse_poset_name(o.poset));
  const PosetView view(poset, tag);

  json elements = json::array();
  for (const auto& p : view.partitions()) elements.push_back(format_partition(space, p));
  r.result["poset"] = {{"name", "B_" + to_string(tag.name)},
                       {"elements", elements},
                       {"dot", poset_dot(space, poset, tag.members)}};
  if (!o.dot_path.empty()) write_file(o.dot_path, poset_dot(space, poset, tag.members));

  json laws = json::object();
  auto record = [&](const std::string& name, const std::optional<std::string>& violation) {
    laws[name] = violation ? *violation : "ok";
    if (violation) r.exit_code = kInternalError;
  };
  constexpr std::size_t kGammaLimit = 16;
  if (view.size() <= kGammaLimit) {
    const GammaReport gamma = gamma_iso_check(view.order(), kGammaLimit);
    record("global_sections_vs_upper_sets", gamma.ok ? std::nullopt : std::optional(gamma.detail));
  }

  if (o.construction == "events") {
    auto f = event_varying_set(view);
    const Subobject<Event> s = accessible_subobject(view, f);
    record("functor", f->functor_law_violation());
    record("subobject", s.square_violation());
    record("characteristic_naturality", characteristic_naturality_violation(*f, s));
    const EventAlgebra h = event_algebra(view);
    json table = json::array();
    for (std::size_t i = 0; i < h.events.size(); ++i)
      table.push_back({{"event", space.format(h.events[i])},
                       {"upper_set", upper_set_json(view, space, h.elements[i].members)}});
    r.result["construction"] = "events";
    r.result["global_elements"] = table;
    r.result["algebra"] = algebra_json(view, space, h.algebra, r);
    r.result["laws"] = laws;
    r.text << "B_" << to_string(tag.name) << ": " << view.size() << " elements; " << h.events.size()
           << " accessible events; H<E_A> has " << h.algebra.size() << " elements\n";
    return;
  }
  if (o.construction != "valuations")
    throw Error(ErrorCode::Schema, "--construction must be valuations or events");

  std::optional<std::vector<Partition>> generators;
  std::string subobject_name = "literal";
  if (o.subobject != "literal") {
    if (o.subobject.rfind("q=", 0) != 0)
      throw Error(ErrorCode::Schema, "--subobject must be literal or q=<poset>");
    const PosetTag q = require_tag(poset, parse_poset_name(o.subobject.substr(2)));
    generators.emplace();
    for (auto i : q.members) generators->push_back(poset.at(i));
    subobject_name = "q=B_" + to_string(q.name);
  }

  auto vv = valuation_varying_set(view);
  const ValuationSubobject s = valuation_subobject(view, vv, generators);
  record("functor", vv->functor_law_violation());
  record("subobject", s.subobject.square_violation());
  record("characteristic_naturality", characteristic_naturality_violation(*vv, s.subobject));

  const HMap h = h_map(view, generators);
  json table = json::array();
  for (std::size_t i = 0; i < h.valuations.size(); ++i)
    table.push_back({{"partition", format_partition(space, h.valuations[i].partition())},
                     {"block", space.format(h.valuations[i].block())},
                     {"upper_set", upper_set_json(view, space, h.images[i].members)}});
  json collisions = json::array();
  for (const auto& group : h.collisions) collisions.push_back(group);

  bool top_characteristic = true;
  for (std::size_t p = 0; p < view.size(); ++p)
    for (std::size_t x = 0; x < vv->stage(p).size(); ++x)
      top_characteristic = top_characteristic &&
                           characteristic(*vv, s.subobject, p, x).members == view.order().up(p);

  r.result["construction"] = "valuations";
  r.result["subobject"] = subobject_name;
  r.result["degenerate"] = h.degenerate;
  r.result["characteristic_is_top"] = top_characteristic;
  r.result["global_elements"] = table;
  r.result["collisions"] = collisions;
  r.result["algebra"] = algebra_json(view, space, h.algebra, r);
  r.result["laws"] = laws;
  if (h.degenerate)
    r.diagnostics.push_back("degenerate subobject: S equals V at every stage, so every G<phi> is "
                            "the up-set of its home partition");
  r.text << "B_" << to_string(tag.name) << ": " << view.size() << " elements; subobject "
         << subobject_name << (h.degenerate ? " (degenerate)" : "") << "; " << h.valuations.size()
         << " valuations -> H has " << h.algebra.size() << " elements; " << h.collisions.size()
         << " collision groups\n";
}

template <class Field>
DiffReport oracle_diff(const io::TheoryFile& file, const HistoriesTheory<Field>& t,
                       const std::string& what) {
  constexpr std::size_t kViewLimit = 16;
  DiffReport d;
  const bool all = what == "all";
  const GrainingPoset poset = poset_for(file, t);
  if (all || what == "measure") d.merge(diff_measure(t));
  if (all || what == "decoherence") d.merge(diff_decoherence(t, poset));
  if (all || what == "schemes") d.merge(diff_schemes(t, poset));
  for (auto name : {PosetTagName::B, PosetTagName::D, PosetTagName::P, PosetTagName::PD}) {
    const PosetTag tag = sub_poset(poset, name);
    if (tag.size() > kViewLimit) continue;
    const PosetView view(poset, tag);
    if (all || what == "heyting") d.merge(diff_heyting(view.order()));
    if ((all || what == "topos") && name == PosetTagName::D) {
      d.merge(diff_topos(view, std::nullopt));
      std::vector<Partition> q;
      for (auto i : sub_poset(poset, PosetTagName::PD).members) q.push_back(poset.at(i));
      d.merge(diff_topos(view, q));
    }
  }
  return d;
}

}  // namespace detail

inline void run_theory_command(const io::TheoryFile& file, const Options& o, Report& r) {
  r.fingerprint = io::fingerprint(file);
  const io::AnyTheory theory = io::build_theory(file);
  std::visit(
      [&](const auto& t) {
        detail::float_notice(t, r);
        if (o.command == "check") detail::check(file, t, o, r);
        else if (o.command == "partitions") detail::partitions(file, t, o, r);
        else if (o.command == "coevents") detail::coevents(file, t, o, r);
        else if (o.command == "valuations") detail::valuations(file, t, o, r);
        else if (o.command == "topos") detail::topos(file, t, o, r);
      },
      theory);
}

inline void run_oracle(const Options& o, Report& r) {
  std::vector<std::pair<std::string, io::TheoryFile>> suite;
  if (!o.theory_path.empty()) suite.emplace_back(o.theory_path, io::parse(o.theory_path));
  for (int i = 0; i < o.random_count; ++i) {
    const std::uint64_t seed = o.seed + static_cast<std::uint64_t>(i);
    const int n = 1 + i % std::max(1, o.max_n);
    suite.emplace_back("random(" + std::to_string(seed) + "," + std::to_string(n) + ")",
                       io::random_example(seed, n));
  }
  if (suite.empty()) throw Error(ErrorCode::Schema, "oracle needs a theory file or --random N");
  DiffReport total;
  json theories = json::array();
  for (const auto& [name, file] : suite) {
    const DiffReport d = std::visit([&](const auto& t) { return detail::oracle_diff(file, t, o.check); },
                                    io::build_theory(file));
    theories.push_back({{"theory", name},
                        {"fingerprint", io::fingerprint(file)},
                        {"comparisons", d.comparisons},
                        {"mismatches", d.mismatches}});
    total.merge(d);
  }
  if (suite.size() == 1) r.fingerprint = io::fingerprint(suite.front().second);
  r.result = {{"check", o.check},
              {"theories", theories},
              {"comparisons", total.comparisons},
              {"mismatches", total.mismatches.size()}};
  if (o.random_count > 0) r.result["seeds"] = {o.seed, o.seed + static_cast<std::uint64_t>(o.random_count) - 1};
  if (!total.empty()) {
    r.exit_code = kInternalError;
    r.diagnostics.push_back("OracleMismatch: " + total.mismatches.front());
  }
  r.text << suite.size() << " theories, " << total.comparisons << " comparisons, "
         << total.mismatches.size() << " mismatches\n";
  for (const auto& m : total.mismatches) r.text << "  mismatch: " << m << "\n";
}

/// Parses argv, runs the command and writes to `out` / `err`. Returns the
/// process exit code: 0 success, 1 bad input, 2 broken internal invariant.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"qmt: quantum measure theory, coevents and consistent-histories valuations"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json_output, "Machine-readable JSON report on stdout");

  auto* check = app.add_subcommand("check", "Validate a theory and its sum rules");
  check->add_option("theory", o.theory_path, "Theory file")->required();

  auto* parts = app.add_subcommand("partitions", "List partitions with D/P/PD tags");
  parts->add_option("theory", o.theory_path, "Theory file")->required();
  parts->add_option("--tag", o.tag, "Only members of b|d|p|pd|o|e");
  parts->add_option("--dot", o.dot_path, "Write the Hasse diagram as DOT");

  auto* coev = app.add_subcommand("coevents", "Coevent schemes by dual event");
  coev->add_option("theory", o.theory_path, "Theory file")->required();
  coev->add_option("--scheme", o.scheme, "m|cons-d|cons-c|cons-m");
  coev->add_option("--mode", o.mode, "primitive|literal minimality");
  coev->add_option("--reading", o.reading, "literal|loose support condition");

  auto* vals = app.add_subcommand("valuations", "Pooled classical valuations");
  vals->add_option("theory", o.theory_path, "Theory file")->required();
  vals->add_option("--set", o.set, "vd|vc|vpd|vpd-c");
  vals->add_option("--partition", o.partition, "Only valuations on this partition, e.g. a|b,c");

  auto* top = app.add_subcommand("topos", "Varying sets, global elements and Heyting algebras");
  top->add_option("theory", o.theory_path, "Theory file")->required();
  top->add_option("--poset", o.poset, "b|bd|bp|bpd|bo|be");
  top->add_option("--subobject", o.subobject, "literal|q=<poset>");
  top->add_option("--construction", o.construction, "valuations|events");
  top->add_option("--dot", o.dot_path, "Write the poset's Hasse diagram as DOT");

  auto* orc = app.add_subcommand("oracle", "Diff fast paths against naive recomputation");
  orc->add_option("theory", o.theory_path, "Theory file");
  orc->add_option("--check", o.check, "all|measure|decoherence|schemes|heyting|topos");
  orc->add_option("--random", o.random_count, "Also check N seeded random theories");
  orc->add_option("--seed", o.seed, "First seed of the random suite");
  orc->add_option("--max-n", o.max_n, "Random theories cycle through 1..max-n histories");

  auto* ex = app.add_subcommand("examples", "Write a built-in theory file");
  ex->add_option("name", o.example, "coin|three-path|single|random")->required();
  ex->add_option("--seed", o.seed, "Seed for random");
  ex->add_option("--n", o.n, "History count for random");
  ex->add_option("-o,--output", o.output_path, "Output path (stdout if absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  o.command = app.get_subcommands().front()->get_name();

  Report r;
  r.command = o.command;
  try {
    if (o.command == "examples") {
      const std::string text = io::emit(io::example(o.example, o.seed, o.n));
      if (o.output_path.empty()) out << text;
      else detail::write_file(o.output_path, text);
      return kOk;
    }
    if (o.command == "oracle") {
      r.flags = {{"check", o.check}, {"random", o.random_count}, {"seed", o.seed}, {"max_n", o.max_n}};
      run_oracle(o, r);
    } else {
      if (o.command == "partitions") r.flags = {{"tag", o.tag}};
      if (o.command == "coevents") r.flags = {{"scheme", o.scheme}, {"mode", o.mode}, {"reading", o.reading}};
      if (o.command == "valuations") r.flags = {{"set", o.set}, {"partition", o.partition}};
      if (o.command == "topos")
        r.flags = {{"poset", o.poset}, {"subobject", o.subobject}, {"construction", o.construction}};
      run_theory_command(io::parse(o.theory_path), o, r);
    }
  } catch (const Error& e) {
    err << json{{"error", std::string(to_string(e.code()))}, {"detail", e.detail()}}.dump() << "\n";
    return is_internal(e.code()) ? kInternalError : kInputError;
  } catch (const std::exception& e) {
    err << json{{"error", "Internal"}, {"detail", e.what()}}.dump() << "\n";
    return kInternalError;
  }

  if (o.json_output) {
    out << r.to_json().dump(2) << "\n";
  } else {
    out << r.text.str();
  }
  for (const auto& d : r.diagnostics) err << "note: " << d << "\n";
  return r.exit_code;
}

}  // namespace qmt::cli
