// Copyright 2026 The Dialogue Games Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dialogue_games/backends.h"

#include <algorithm>

#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfigInvalid:
      return "ConfigInvalid";
    case ErrorCode::kWrongNodeKind:
      return "WrongNodeKind";
    case ErrorCode::kIllegalAction:
      return "IllegalAction";
    case ErrorCode::kBackendFailure:
      return "BackendFailure";
    case ErrorCode::kTemplateError:
      return "TemplateError";
    case ErrorCode::kNotTerminal:
      return "NotTerminal";
    case ErrorCode::kUnknownDomain:
      return "UnknownDomain";
    case ErrorCode::kMissingParam:
      return "MissingParam";
    case ErrorCode::kShapeMismatch:
      return "ShapeMismatch";
    case ErrorCode::kDivergence:
      return "Divergence";
    case ErrorCode::kProposerExhausted:
      return "ProposerExhausted";
    case ErrorCode::kNonFiniteLoss:
      return "NonFiniteLoss";
    case ErrorCode::kMissingAsset:
      return "MissingAsset";
    case ErrorCode::kParseError:
      return "ParseError";
    case ErrorCode::kIoError:
      return "IoError";
  }
  return "Unknown";
}

std::string_view OutcomeTagName(OutcomeTag tag) {
  switch (tag) {
    case OutcomeTag::kValid:
      return "valid";
    case OutcomeTag::kRejected:
      return "rejected";
    case OutcomeTag::kIncomplete:
      return "incomplete";
  }
  return "incomplete";
}

OutcomeTag ParseOutcomeTag(std::string_view name) {
  std::string n = NormalizeLabel(name);
  if (n == "valid") return OutcomeTag::kValid;
  if (n == "rejected") return OutcomeTag::kRejected;
  if (n == "incomplete") return OutcomeTag::kIncomplete;
  throw Error(ErrorCode::kParseError, "unknown outcome '" + n + "'");
}

std::vector<int> ArgmaxSet(std::span<const double> values) {
  std::vector<int> out;
  if (values.empty()) return out;
  const double best = *std::max_element(values.begin(), values.end());
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i] >= best - 1e-12) out.push_back(static_cast<int>(i));
  }
  return out;
}

}  // namespace dialogue_games
