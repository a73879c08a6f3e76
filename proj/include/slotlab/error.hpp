/*
 Copyright 2026 slotlab developers
 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      http://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

#include <stdexcept>
#include <string>

namespace slotlab {

// Mirrors the slotlab_status codes exposed by the public C header.
enum class Status : int {
  Ok = 0,
  InvalidArgument = 1,
  IllegalBet = 2,
  StateNotActive = 3,
  ParseFailure = 4,
  AgentUnavailable = 5,
  DegenerateInput = 6,
  IncompleteDesign = 7,
  EmptyInput = 8,
  SingleClassDataset = 9,
  IoError = 10,
  FormatError = 11,
  OutputConflict = 12,
  UnknownReport = 13,
  Internal = 14,
};

class Error : public std::runtime_error {
 public:
  Error(Status code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Status code() const noexcept { return code_; }

 private:
  Status code_;
};

[[noreturn]] inline void raise(Status code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, Status code, const std::string& message) {
  if (!condition) raise(code, message);
}

}  // namespace slotlab
