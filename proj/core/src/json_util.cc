// core/src/json_util.cc

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

#include "json_util.h"

#include <fstream>

#include "doalab/error.h"

namespace doalab {
namespace internal {

using nlohmann::json;

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  Require(out.good(), ErrorKind::kIo, "cannot open for writing: " + path);
  out << text;
  out.flush();
  Require(out.good(), ErrorKind::kIo, "write failed: " + path);
}

json LoadJsonFile(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  Require(in.good(), ErrorKind::kIo, std::string("cannot open ") + what + ": " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    Fail(ErrorKind::kInvalidArgument,
         std::string("malformed ") + what + " " + path + ": " + e.what());
  }
}

json RoomToJson(const Room& room) {
  return json{{"name", room.name},
              {"dims", {room.dims.x(), room.dims.y(), room.dims.z()}},
              {"rt60", room.rt60}};
}

Room RoomFromJson(const json& j) {
  Room room;
  room.name = j.at("name").get<std::string>();
  const auto& dims = j.at("dims");
  Require(dims.is_array() && dims.size() == 3, ErrorKind::kInvalidArgument,
          "room dims must be [Lx, Ly, Lz]");
  room.dims = Eigen::Vector3d(dims[0].get<double>(), dims[1].get<double>(),
                              dims[2].get<double>());
  room.rt60 = j.at("rt60").get<double>();
  return room;
}

}  // namespace internal
}  // namespace doalab
