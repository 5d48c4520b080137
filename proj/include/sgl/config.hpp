#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "sgl/forms.hpp"

namespace sgl {

/// Parsed problem configuration. Owns its grid.
struct Problem {
    std::shared_ptr<Grid> grid;
    std::unique_ptr<FormContext> ctx;
    std::optional<StructuralConstants> declared;
    GrowthMode mode = GrowthMode::Strict;
    std::uint64_t seed = 42;
};

/// Load from the canonical JSON document:
/// {
///   "grid": {"dim": 1|2, "extent": [[a,b](,[a,b])], "n": [nx(,ny)],
///            "bc": "dirichlet"|"neumann"},
///   "A":  expr | [[expr,...],...] | {"values": [...]},   (expr strings use the DSL)
///   "b1": expr | [expr(,expr)] | {"values": [...]},
///   "b2": likewise,
///   "Q":  expr | {"values": [...]},
///   "constants": { "alpha_s": ..., ... },                 (declared overrides)
///   "mode": "thm1.3" | "thm1.5"
/// }
/// Raw "values" arrays are row-major over nodes with complex entries as [re, im].
Problem load_problem(const nlohmann::json& config);

Problem load_problem_text(const std::string& config_json);

/// Constants for the run: declared overrides merged over measured values.
StructuralConstants resolve_constants(const Problem& prob, bool measure);

} // namespace sgl
