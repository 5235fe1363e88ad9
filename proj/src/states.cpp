#include "discord_scope/states.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace dscope {

SeparableStateSpec validate(const SeparableStateSpec& spec) {
    if (spec.components.empty()) throw InvalidWeights("state has no components");
    double total = 0.0;
    for (std::size_t i = 0; i < spec.components.size(); ++i) {
        const double w = spec.components[i].weight;
        if (!std::isfinite(w) || w < 0.0)
            throw InvalidWeights("component " + std::to_string(i) +
                                 " has negative or non-finite weight");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightWindow)
        throw InvalidWeights("weights sum to " + std::to_string(total) +
                             ", outside the renormalization window");
    SeparableStateSpec out = spec;
    for (auto& c : out.components) {
        c.weight /= total;
        c.a = canonicalize(c.a);
        c.b = canonicalize(c.b);
    }
    return out;
}

ComplexMat4 assemble_density(const SeparableStateSpec& spec) {
    ComplexMat4 rho = ComplexMat4::Zero();
    for (const auto& c : spec.components)
        rho += c.weight * kron(bloch_to_density(c.a), bloch_to_density(c.b));
    return rho;
}

ClassicalityReport a_classicality(const SeparableStateSpec& spec, double tol) {
    const std::size_t m = spec.components.size();
    std::vector<Ket> kets;
    kets.reserve(m);
    for (const auto& c : spec.components) kets.push_back(bloch_ket(c.a));

    // Union-find over "same state up to phase".
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&parent](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };

    ClassicalityReport report;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            const double overlap = std::abs(kets[i].dot(kets[j]));
            const double to_one = std::abs(1.0 - overlap);
            report.gram_offsets = std::max(report.gram_offsets, std::min(overlap, to_one));
            if (to_one <= tol) parent[find(j)] = find(i);
        }
    }
    report.is_a_classical = report.gram_offsets <= tol;
    if (!report.is_a_classical) return report;

    std::vector<std::size_t> root_slot(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t r = find(i);
        if (root_slot[r] == m) {
            root_slot[r] = report.grouping.size();
            report.grouping.emplace_back();
        }
        report.grouping[root_slot[r]].push_back(i);
    }
    return report;
}

namespace {

double read_number(const nlohmann::json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key))
        throw InvalidSpec(path + "." + key, "missing");
    const auto& v = obj.at(key);
    if (!v.is_number()) throw InvalidSpec(path + "." + key, "not a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw InvalidSpec(path + "." + key, "not finite");
    return x;
}

BlochAngles read_angles(const nlohmann::json& obj, const char* key,
                        const std::string& path, double scale) {
    if (!obj.contains(key)) throw InvalidSpec(path + "." + key, "missing");
    const auto& a = obj.at(key);
    if (!a.is_object()) throw InvalidSpec(path + "." + key, "expected an object");
    const std::string p = path + "." + key;
    return {scale * read_number(a, "theta", p), scale * read_number(a, "phi", p)};
}

}  // namespace

SeparableStateSpec spec_from_json(const nlohmann::json& doc, bool degrees) {
    if (!doc.is_object()) throw InvalidSpec("$", "expected an object");
    if (!doc.contains("components")) throw InvalidSpec("components", "missing");
    const auto& comps = doc.at("components");
    if (!comps.is_array() || comps.empty())
        throw InvalidSpec("components", "expected a non-empty array");
    const double scale = degrees ? kPi / 180.0 : 1.0;
    SeparableStateSpec spec;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const std::string path = "components[" + std::to_string(i) + "]";
        const auto& c = comps[i];
        if (!c.is_object()) throw InvalidSpec(path, "expected an object");
        Component comp;
        comp.weight = read_number(c, "w", path);
        comp.a = read_angles(c, "a", path, scale);
        comp.b = read_angles(c, "b", path, scale);
        spec.components.push_back(comp);
    }
    try {
        return validate(spec);
    } catch (const InvalidWeights& e) {
        throw InvalidSpec("components[].w", e.what());
    }
}

nlohmann::ordered_json spec_to_json(const SeparableStateSpec& spec) {
    nlohmann::ordered_json comps = nlohmann::ordered_json::array();
    for (const auto& c : spec.components) {
        nlohmann::ordered_json j;
        j["w"] = c.weight;
        j["a"] = {{"theta", c.a.theta}, {"phi", c.a.phi}};
        j["b"] = {{"theta", c.b.theta}, {"phi", c.b.phi}};
        comps.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["components"] = std::move(comps);
    return doc;
}

}  // namespace dscope
