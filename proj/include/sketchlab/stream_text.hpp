/*
 * Copyright 2026 The sketchlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sketchlab/stream.hpp"

namespace sketchlab {

// Text stream format, one op per line, space separated:
//
//   INC <key> <delta>
//   RST <key>
//   INS <key>
//   DEL <key>
//   RSTR <lo> <hi>      range reset, inclusive
//
// Keys are decimal unsigned 64-bit; lines starting with '#' are comments and
// blank lines are skipped. Malformed lines raise ParseError with the line
// number.
std::vector<UpdateOp> parse_stream_text(std::istream& in);
std::vector<UpdateOp> parse_stream_file(const std::string& path);

void write_stream_text(const std::vector<UpdateOp>& ops, std::ostream& out);
void write_stream_file(const std::vector<UpdateOp>& ops,
                       const std::string& path);

}  // namespace sketchlab
