#pragma once

#include <string>

#include <nlohmann/json_fwd.hpp>

#include "spaceform/group.hpp"

namespace spaceform {

class SpecParseError : public std::runtime_error {
  public:
    explicit SpecParseError(const std::string& what) : std::runtime_error(what) {}
};

// Strict parser: unknown keys are errors, spherical generators must be unit
// quaternions within 1e-6, rationals may be "p/q" strings or JSON numbers
// (numbers are converted exactly).
GroupSpec parse_group_spec(const nlohmann::json& doc);
GroupSpec load_group_spec(const std::string& path);

// Inverse of the parser; requires every Euclidean generator to carry its
// construction recipe (as parsed or constructor-built generators do).
nlohmann::ordered_json serialize_group_spec(const GroupSpec& spec);

}  // namespace spaceform
