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

#include <stdexcept>
#include <string>
#include <string_view>

namespace qmt {

enum class ErrorCode {
  // measure-core
  DimensionMismatch,
  NonHermitian,
  NotUnitTotal,
  NegativeMeasure,
  NotNormalized,
  ForeignEvent,
  NotASublattice,
  CapExceeded,
  // grainings
  InvalidPartition,
  SpaceMismatch,
  NotAnUpperSet,
  // coevents / valuations
  ZeroCoevent,
  NotMultiplicative,
  EmptyDual,
  NotABlock,
  OutsideDomain,
  NotComparable,
  // topos
  NotAPartialOrder,
  ForeignElement,
  NotASubobject,
  NotAccessibleAnywhere,
  HomeNotInPoset,
  // io
  Syntax,
  Schema,
  UnknownExample,
  // invariant breaches inside the library itself
  InternalUpperSetViolation,
  InternalInvariant,
  OracleMismatch,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NotUnitTotal: return "NotUnitTotal";
    case ErrorCode::NegativeMeasure: return "NegativeMeasure";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::ForeignEvent: return "ForeignEvent";
    case ErrorCode::NotASublattice: return "NotASublattice";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::InvalidPartition: return "InvalidPartition";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::NotAnUpperSet: return "NotAnUpperSet";
    case ErrorCode::ZeroCoevent: return "ZeroCoevent";
    case ErrorCode::NotMultiplicative: return "NotMultiplicative";
    case ErrorCode::EmptyDual: return "EmptyDual";
    case ErrorCode::NotABlock: return "NotABlock";
    case ErrorCode::OutsideDomain: return "OutsideDomain";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::NotAPartialOrder: return "NotAPartialOrder";
    case ErrorCode::ForeignElement: return "ForeignElement";
    case ErrorCode::NotASubobject: return "NotASubobject";
    case ErrorCode::NotAccessibleAnywhere: return "NotAccessibleAnywhere";
    case ErrorCode::HomeNotInPoset: return "HomeNotInPoset";
    case ErrorCode::Syntax: return "Syntax";
    case ErrorCode::Schema: return "Schema";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::InternalUpperSetViolation: return "InternalUpperSetViolation";
    case ErrorCode::InternalInvariant: return "InternalInvariant";
    case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

/// True for codes that signal a broken library invariant rather than bad input.
constexpr bool is_internal(ErrorCode code) {
  return code == ErrorCode::InternalUpperSetViolation ||
         code == ErrorCode::InternalInvariant ||
         code == ErrorCode::OracleMismatch;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code),
        detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace qmt
