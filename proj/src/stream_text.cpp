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

#include "sketchlab/stream_text.hpp"

#include <fstream>
#include <sstream>

#include "sketchlab/errors.hpp"

namespace sketchlab {

namespace {

Key parse_key(const std::string& tok, std::uint64_t line) {
  try {
    std::size_t pos = 0;
    if (tok.empty() || tok[0] == '-') throw std::invalid_argument("negative");
    const unsigned long long v = std::stoull(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return static_cast<Key>(v);
  } catch (const std::exception&) {
    throw ParseError("bad key '" + tok + "'", line);
  }
}

double parse_real(const std::string& tok, std::uint64_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ParseError("bad number '" + tok + "'", line);
  }
}

}  // namespace

std::vector<UpdateOp> parse_stream_text(std::istream& in) {
  std::vector<UpdateOp> ops;
  std::string line;
  std::uint64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string verb;
    if (!(ls >> verb)) continue;  // blank
    if (verb[0] == '#') continue;

    std::vector<std::string> args;
    std::string tok;
    while (ls >> tok) args.push_back(tok);

    const auto need = [&](std::size_t n) {
      if (args.size() != n) {
        throw ParseError(verb + " expects " + std::to_string(n) + " argument(s)",
                         lineno);
      }
    };

    try {
      if (verb == "INC") {
        need(2);
        ops.push_back(UpdateOp::inc(parse_key(args[0], lineno),
                                    parse_real(args[1], lineno)));
      } else if (verb == "RST") {
        need(1);
        ops.push_back(UpdateOp::reset_key(parse_key(args[0], lineno)));
      } else if (verb == "INS") {
        need(1);
        ops.push_back(UpdateOp::insert(parse_key(args[0], lineno)));
      } else if (verb == "DEL") {
        need(1);
        ops.push_back(UpdateOp::delete_key(parse_key(args[0], lineno)));
      } else if (verb == "RSTR") {
        need(2);
        const Key lo = parse_key(args[0], lineno);
        const Key hi = parse_key(args[1], lineno);
        if (lo > hi) throw ParseError("RSTR needs lo <= hi", lineno);
        ops.push_back(UpdateOp::reset_pred(KeyRange{lo, hi}));
      } else {
        throw ParseError("unknown op '" + verb + "'", lineno);
      }
    } catch (const ValidationError& e) {
      throw ParseError(e.what(), lineno);
    }
  }
  return ops;
}

std::vector<UpdateOp> parse_stream_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stream file: " + path);
  return parse_stream_text(in);
}

void write_stream_text(const std::vector<UpdateOp>& ops, std::ostream& out) {
  for (const UpdateOp& op : ops) out << op.to_string() << "\n";
}

void write_stream_file(const std::vector<UpdateOp>& ops,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_stream_text(ops, out);
}

}  // namespace sketchlab
