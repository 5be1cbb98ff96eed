#pragma once

#include <string>
#include <string_view>

#include "relbn/model.hpp"

namespace relbn {

// `.rbn` specification text. Syntax errors throw FormatError with the
// line/column of the offending token; semantic checks are left to validate_spec.
//
//   relation fan/1.
//   prob fan(x) = 1/5.
//   def friends(x,y) := x = y | fan(x) & fan(y) | linked(x,y).
//
// Precedence, tightest first: ! & | -> <->. `->` is right associative;
// a quantifier body extends as far right as possible.
RelationalSpec parse_spec(std::string_view text);
Formula parse_formula(std::string_view text);

// `.rbq` query text: "friends(1,2)=1 | fan(1)=1 ; gamma=1/3".
Query parse_query(std::string_view text);

std::string render_formula(const Formula& f);
std::string render_spec(const RelationalSpec& spec);
std::string render_query(const Query& q);

// `.gbn` ground network text, one line per node after a `domain N` header:
//   root fan(1) 1/5
//   def friends(1,1) := true | fan(1) & fan(1) | linked(1,1)
std::string render_network(const GroundNetwork& net);
GroundNetwork parse_network(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace relbn
