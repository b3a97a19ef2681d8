#include "compfeat/config.hpp"

#include "compfeat/error.hpp"

#include <json.hpp>

#include <fstream>

namespace compfeat {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw ParseError(std::string("config: missing '") + key + "' in " + where);
    return *it;
}

std::uint32_t require_u32(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ParseError(std::string("config: '") + key + "' in " + where +
                         " must be a nonnegative integer");
    return v.get<std::uint32_t>();
}

double require_number(const json& obj, const char* key, const char* where) {
    const json& v = require(obj, key, where);
    if (!v.is_number())
        throw ParseError(std::string("config: '") + key + "' in " + where + " must be a number");
    return v.get<double>();
}

BaseSpace parse_space(const json& spec) {
    if (!spec.is_object()) throw ParseError("config: 'space' must be an object");
    std::string kind = require(spec, "kind", "space").get<std::string>();
    if (kind == "binary") return BaseSpace::binary();
    if (kind == "circle") return BaseSpace::circle();
    if (kind == "categorical") return BaseSpace::categorical(require_u32(spec, "n", "space"));
    if (kind == "gaussian")
        return BaseSpace::gaussian(require_u32(spec, "d", "space"),
                                   require_number(spec, "a", "space"));
    if (kind == "sphere_pair") return BaseSpace::sphere_coord_pair(require_u32(spec, "d", "space"));
    if (kind == "sphere_proj") return BaseSpace::sphere_projection(require_u32(spec, "d", "space"));
    throw ParseError("config: unknown space kind '" + kind + "'");
}

ConjugateActivation parse_activation(const json& spec) {
    if (!spec.is_object()) throw ParseError("config: 'activation' must be an object");
    std::string kind = require(spec, "kind", "activation").get<std::string>();
    if (kind == "exp") return ConjugateActivation::exp_scaled(require_number(spec, "c", "activation"));
    if (kind == "relu")
        return ConjugateActivation::relu_conjugate(require_u32(spec, "max_degree", "activation"));
    if (kind == "explicit") {
        const json& coeffs = require(spec, "coeffs", "activation");
        if (!coeffs.is_array()) throw ParseError("config: 'coeffs' must be an array");
        std::vector<double> values;
        values.reserve(coeffs.size());
        for (const auto& c : coeffs) {
            if (!c.is_number()) throw ParseError("config: 'coeffs' entries must be numbers");
            values.push_back(c.get<double>());
        }
        return ConjugateActivation::explicit_series(std::move(values));
    }
    throw ParseError("config: unknown activation kind '" + kind + "'");
}

} // namespace

Skeleton parse_skeleton_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("config: top level must be an object");

    const json& inputs = require(doc, "inputs", "config");
    if (!inputs.is_array() || inputs.empty())
        throw ParseError("config: 'inputs' must be a non-empty array");
    std::vector<BaseSpace> spaces;
    spaces.reserve(inputs.size());
    NodeId expected = 1;
    for (const auto& node : inputs) {
        if (!node.is_object()) throw ParseError("config: input entries must be objects");
        NodeId id = require_u32(node, "id", "input node");
        if (id != expected)
            throw ParseError("config: input ids must be dense 1..n in order (expected " +
                             std::to_string(expected) + ", got " + std::to_string(id) + ")");
        spaces.push_back(parse_space(require(node, "space", "input node")));
        ++expected;
    }

    std::vector<InternalNode> internal;
    auto internal_it = doc.find("internal");
    if (internal_it != doc.end()) {
        if (!internal_it->is_array()) throw ParseError("config: 'internal' must be an array");
        for (const auto& node : *internal_it) {
            if (!node.is_object()) throw ParseError("config: internal entries must be objects");
            NodeId id = require_u32(node, "id", "internal node");
            if (id != expected)
                throw ParseError("config: internal ids must be dense n+1..m in order (expected " +
                                 std::to_string(expected) + ", got " + std::to_string(id) + ")");
            const json& in_edges = require(node, "in", "internal node");
            if (!in_edges.is_array())
                throw ParseError("config: 'in' of node " + std::to_string(id) +
                                 " must be an array");
            InternalNode parsed{parse_activation(require(node, "activation", "internal node")),
                                {}};
            for (const auto& u : in_edges) {
                if (!u.is_number_unsigned() && !u.is_number_integer())
                    throw ParseError("config: 'in' entries must be node ids");
                parsed.inputs.push_back(u.get<NodeId>());
            }
            internal.push_back(std::move(parsed));
            ++expected;
        }
    }

    NodeId output = require_u32(doc, "output", "config");
    return Skeleton(std::move(spaces), std::move(internal), output);
}

Skeleton load_skeleton_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_skeleton_config(text);
}

} // namespace compfeat
