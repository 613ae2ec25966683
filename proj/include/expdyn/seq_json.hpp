#pragma once

#include <string>

#include "expdyn/seq.hpp"

namespace expdyn {

// Builds a sequence from a JSON object:
//   {"kind": "constant",       "lambda": 1.0}
//   {"kind": "uniform_random", "delta": 0.1, "seed": 42}
//   {"kind": "borel_random",   "cdf": [[x0, 0.0], ..., [xk, 1.0]], "seed": 42}
//   {"kind": "power_law",      "p": 2.0, "c": 0.1}
//   {"kind": "critical_exact"}
//   {"kind": "block_repeat"}
//   {"kind": "adaptive_escape", "rect": [0.2, 0.1, 0.8, 0.4], "grid": [5, 5],
//    "blocks": 3, "eps0": 1e-3}
// All adaptive fields are optional.  Throws InvalidParameter on malformed
// input.
ParameterSequence parse_sequence_json(const std::string& text);

// Reads the file and parses its contents; `spec` values that start with '{'
// are treated as inline JSON instead of a path.
ParameterSequence load_sequence_spec(const std::string& spec);

}  // namespace expdyn
