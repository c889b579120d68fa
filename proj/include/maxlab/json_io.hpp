#pragma once

/// \file json_io.hpp
/// JSON round-tripping for the three function classes.
///
/// Schema: { "kind": "discrete" | "step" | "pwl",
///           "mode": "rational" | "f64",
///           ...kind-specific fields... }
/// Rational scalars serialize as "p/q" strings; float64 scalars as JSON
/// numbers.  A file whose mode does not match the requested scalar type is
/// rejected: modes never mix inside one computation.

#include "maxlab/functions.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

namespace maxlab {

using Json = nlohmann::json;

template <class S>
Json scalar_to_json(const S& v) {
    if constexpr (scalar_traits<S>::exact) {
        return scalar_traits<S>::to_string(v);
    } else {
        return v;
    }
}

template <class S>
S scalar_from_json(const Json& j) {
    if constexpr (scalar_traits<S>::exact) {
        if (j.is_string()) return scalar_traits<S>::parse(j.get<std::string>());
        if (j.is_number_integer()) return scalar_traits<S>::from_long(j.get<long>());
        throw std::invalid_argument(
            "rational mode requires \"p/q\" strings or integers, got: " + j.dump());
    } else {
        if (j.is_number()) return j.get<double>();
        if (j.is_string()) return scalar_traits<S>::parse(j.get<std::string>());
        throw std::invalid_argument("f64 mode requires numbers, got: " + j.dump());
    }
}

template <class S>
Json scalar_list_to_json(const std::vector<S>& vs) {
    Json arr = Json::array();
    for (const auto& v : vs) arr.push_back(scalar_to_json<S>(v));
    return arr;
}

template <class S>
std::vector<S> scalar_list_from_json(const Json& j) {
    if (!j.is_array()) throw std::invalid_argument("expected an array of scalars");
    std::vector<S> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(scalar_from_json<S>(e));
    return out;
}

template <class S>
Json to_json(const DiscreteBVFunction<S>& f) {
    return Json{{"kind", "discrete"},
                {"mode", scalar_traits<S>::mode_name()},
                {"core_lo", f.core_lo()},
                {"core_values", scalar_list_to_json<S>(f.core_values())},
                {"left_tail", scalar_to_json<S>(f.left_tail())},
                {"right_tail", scalar_to_json<S>(f.right_tail())}};
}

template <class S>
Json to_json(const StepFunction<S>& f) {
    return Json{{"kind", "step"},
                {"mode", scalar_traits<S>::mode_name()},
                {"breakpoints", scalar_list_to_json<S>(f.breakpoints())},
                {"piece_values", scalar_list_to_json<S>(f.piece_values())}};
}

template <class S>
Json to_json(const PiecewiseLinearFunction<S>& f) {
    Json nodes = Json::array();
    for (std::size_t i = 0; i < f.node_count(); ++i)
        nodes.push_back(Json::array(
            {scalar_to_json<S>(f.node_x()[i]), scalar_to_json<S>(f.node_y()[i])}));
    return Json{{"kind", "pwl"}, {"mode", scalar_traits<S>::mode_name()}, {"nodes", nodes}};
}

namespace detail {

template <class S>
void require_mode(const Json& j) {
    const std::string mode = j.at("mode").get<std::string>();
    if (mode != scalar_traits<S>::mode_name())
        throw std::invalid_argument("mode mismatch: file is \"" + mode +
                                    "\" but this computation runs in \"" +
                                    std::string(scalar_traits<S>::mode_name()) + "\"");
}

}  // namespace detail

template <class S>
DiscreteBVFunction<S> discrete_from_json(const Json& j) {
    detail::require_mode<S>(j);
    return DiscreteBVFunction<S>(j.at("core_lo").get<long>(),
                                 scalar_list_from_json<S>(j.at("core_values")),
                                 scalar_from_json<S>(j.at("left_tail")),
                                 scalar_from_json<S>(j.at("right_tail")));
}

template <class S>
StepFunction<S> step_from_json(const Json& j) {
    detail::require_mode<S>(j);
    return StepFunction<S>(scalar_list_from_json<S>(j.at("breakpoints")),
                           scalar_list_from_json<S>(j.at("piece_values")));
}

template <class S>
PiecewiseLinearFunction<S> pwl_from_json(const Json& j) {
    detail::require_mode<S>(j);
    const Json& nodes = j.at("nodes");
    std::vector<S> xs, ys;
    for (const auto& node : nodes) {
        if (!node.is_array() || node.size() != 2)
            throw std::invalid_argument("pwl node must be an [x, y] pair");
        xs.push_back(scalar_from_json<S>(node[0]));
        ys.push_back(scalar_from_json<S>(node[1]));
    }
    return PiecewiseLinearFunction<S>(std::move(xs), std::move(ys));
}

/// Tagged union for "whatever function the input file holds".
template <class S>
struct LoadedFunction {
    std::optional<DiscreteBVFunction<S>> discrete;
    std::optional<StepFunction<S>> step;
    std::optional<PiecewiseLinearFunction<S>> pwl;

    std::string kind() const {
        if (discrete) return "discrete";
        if (step) return "step";
        return "pwl";
    }
};

template <class S>
LoadedFunction<S> function_from_json(const Json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    LoadedFunction<S> out;
    if (kind == "discrete") {
        out.discrete = discrete_from_json<S>(j);
    } else if (kind == "step") {
        out.step = step_from_json<S>(j);
    } else if (kind == "pwl") {
        out.pwl = pwl_from_json<S>(j);
    } else {
        throw std::invalid_argument("unknown function kind: \"" + kind + "\"");
    }
    return out;
}

}  // namespace maxlab
