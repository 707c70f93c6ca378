#pragma once

#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "escape/geometry.hpp"

namespace escape {

// Field order is fixed so serialized files are byte-stable across runs.
using Json = nlohmann::ordered_json;

using Instance = std::variant<RepInstance, SepInstance>;

inline const Boundary& boundary_of(const Instance& inst) {
    return std::visit([](const auto& v) -> const Boundary& { return v.boundary; }, inst);
}
inline std::size_t size_of(const Instance& inst) {
    return std::visit([](const auto& v) { return v.size(); }, inst);
}

struct Solution {
    EscapeAssignment directions;
    std::int64_t density = 0;
    std::int64_t boundary_density = 0;
};

Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);

Json solution_to_json(const Solution& sol);
Solution solution_from_json(const Json& j);

// File helpers; throw ParseError on malformed input, ValidationError on
// well-formed input that violates instance constraints.
Instance load_instance(const std::string& path);
void save_instance(const Instance& inst, const std::string& path);
Solution load_solution(const std::string& path);
void save_solution(const Solution& sol, const std::string& path);

Json load_json(const std::string& path);
void save_json(const Json& j, const std::string& path);

}  // namespace escape
