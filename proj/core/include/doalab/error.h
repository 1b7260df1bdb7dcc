// core/include/doalab/error.h

// Copyright 2026  The doalab authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef DOALAB_ERROR_H_
#define DOALAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace doalab {

// Every failure the library reports deliberately carries a kind, so callers
// (and the negative-path tests) can distinguish e.g. a corrupted magic number
// from a short read without parsing message strings.
enum class ErrorKind {
  kInvalidArgument,
  kGeometry,
  kBadMagic,
  kBadVersion,
  kShapeMismatch,
  kTruncatedFile,
  kCountMismatch,
  kIo,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void Fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline void Require(bool cond, ErrorKind kind, const std::string& msg) {
  if (!cond) Fail(kind, msg);
}

}  // namespace doalab

#endif  // DOALAB_ERROR_H_
