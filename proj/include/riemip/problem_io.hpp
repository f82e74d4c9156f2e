#pragma once

#include <optional>
#include <string>

#include "riemip/problem.hpp"

namespace riemip {

/// A problem loaded from a definition file, with the optional initial point
/// it carries.
struct LoadedProblem {
  ConstrainedProblem problem;
  std::optional<PrimalDualPoint> initial;
};

/// Loads a polynomial problem on a Euclidean manifold from a JSON definition
/// file. Schema:
///
///   {
///     "name": "example",                       // optional
///     "manifold": {"kind": "euclidean", "dim": 2},
///     "objective": [ {"coeff": 0.5, "powers": [2, 0]}, ... ],
///     "inequalities": [ [ {"coeff": 1.0, "powers": [1, 0]} ], ... ],
///     "equalities":   [ [ ... ], ... ],
///     "initial": {"x": [0.8, 0.3], "y": [1.0], "z": [0.0]}   // optional;
///                                               // y defaults to 1, z to 0
///   }
///
/// Each polynomial is a list of terms coeff * prod_i x_i^powers[i] with one
/// power entry per variable. Derivative oracles are exact.
LoadedProblem load_problem_file(const std::string& path);

/// Parses the same schema from an in-memory JSON string (used by tests).
LoadedProblem parse_problem_json(const std::string& text, const std::string& display_name);

}  // namespace riemip
