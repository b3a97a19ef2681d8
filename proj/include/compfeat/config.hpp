#pragma once

#include "compfeat/skeleton.hpp"

#include <string>

namespace compfeat {

// Skeleton config document (JSON):
//   {
//     "inputs":   [{"id": 1, "space": {"kind": "circle"}}, ...],
//     "internal": [{"id": 9, "activation": {"kind": "exp", "c": 0.25},
//                   "in": [1, 2, 3]}, ...],
//     "output":   9
//   }
// Space kinds: binary | circle | categorical{n} | gaussian{d,a} |
//              sphere_pair{d} | sphere_proj{d}.
// Activation kinds: exp{c} | relu{max_degree} | explicit{coeffs}.
// Input ids must be 1..n in order and internal ids n+1..m in order, matching
// the node indexing used everywhere else.
//
// Malformed JSON or schema violations throw ParseError; range violations in
// activation/space parameters throw ParameterError. Graph-level problems
// (cycles, multiple sinks, ...) are left to validate().

Skeleton parse_skeleton_config(const std::string& json_text);
Skeleton load_skeleton_config(const std::string& path);

} // namespace compfeat
