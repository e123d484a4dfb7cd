// Copyright 2026 The optidct Authors
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

#ifndef OPTIDCT_ERRORS_H_
#define OPTIDCT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace optidct {

// Argument and precondition violations use the standard exceptions
// (std::invalid_argument, std::out_of_range). The types below cover data
// and file problems a caller may want to tell apart.

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

// Malformed header, bad magic, truncated payload, unsupported variant.
class FormatError : public Error {
 public:
  using Error::Error;
};

class ChecksumError : public Error {
 public:
  using Error::Error;
};

// Too few training samples to determine a 64x64 kernel.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
};

}  // namespace optidct

#endif  // OPTIDCT_ERRORS_H_
