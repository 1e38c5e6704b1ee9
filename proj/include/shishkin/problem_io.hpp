#pragma once

// Problem files are JSON objects with exactly these keys:
//
//   {
//     "n":   2,                               system size
//     "T":   1.0,                             horizon, > 0
//     "eps": [0.01, 0.1],                     strictly increasing, in (0, 1]
//     "u0":  [1.0, 1.0],                      initial value
//     "A":   [[[2], [-1]], [[-1], [2, 1]]],   n x n coefficient lists, c0 + c1 t + ...
//     "f":   [[0], [1, 0, 1]]                 n coefficient lists
//   }
//
// Unknown keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>

#include "shishkin/problem.hpp"

namespace shishkin {

/// Throws ParseError (syntax, shape, unknown key) or ValidationError (eps).
ProblemSpec parse_problem_json(std::string_view text);
ProblemSpec load_problem(const std::filesystem::path& path);

std::string problem_to_json(const ProblemSpec& spec);

}  // namespace shishkin
