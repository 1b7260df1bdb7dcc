// core/src/json_util.h

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

// Internal JSON plumbing shared by the translation units that read or write
// sidecar files. Not part of the installed API: public headers stay free of
// the vendored json type.

#ifndef DOALAB_SRC_JSON_UTIL_H_
#define DOALAB_SRC_JSON_UTIL_H_

#include <string>

#include "doalab/acoustics.h"
#include "json.hpp"

namespace doalab {
namespace internal {

void WriteTextFile(const std::string& path, const std::string& text);

// Parses `path`, failing with a typed error naming `what` on io/syntax
// problems.
nlohmann::json LoadJsonFile(const std::string& path, const char* what);

nlohmann::json RoomToJson(const Room& room);
Room RoomFromJson(const nlohmann::json& j);

}  // namespace internal
}  // namespace doalab

#endif  // DOALAB_SRC_JSON_UTIL_H_
