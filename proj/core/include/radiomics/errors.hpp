// errors.hpp : error type shared by all radiomics components
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace radiomics {

// input: bad files, bad arguments (CLI exit code 2)
// computation: valid inputs that a computation cannot handle (CLI exit code 3)
enum class ErrorKind { input, computation };

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, std::string path = {})
      : std::runtime_error(std::move(message)), kind_(kind), path_(std::move(path)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& path() const noexcept { return path_; }

private:
  ErrorKind kind_;
  std::string path_;
};

[[noreturn]] inline void throw_input(std::string message, std::string path = {}) {
  throw Error(ErrorKind::input, std::move(message), std::move(path));
}

[[noreturn]] inline void throw_computation(std::string message) {
  throw Error(ErrorKind::computation, std::move(message));
}

}  // namespace radiomics
