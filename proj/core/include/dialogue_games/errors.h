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

#ifndef DIALOGUE_GAMES_ERRORS_H_
#define DIALOGUE_GAMES_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace dialogue_games {

enum class ErrorCode {
  kConfigInvalid,
  kWrongNodeKind,
  kIllegalAction,
  kBackendFailure,
  kTemplateError,
  kNotTerminal,
  kUnknownDomain,
  kMissingParam,
  kShapeMismatch,
  kDivergence,
  kProposerExhausted,
  kNonFiniteLoss,
  kMissingAsset,
  kParseError,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception type. The code
// lets callers (notably the CLI) map failures onto exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_ERRORS_H_
