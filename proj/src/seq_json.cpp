#include "expdyn/seq_json.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "expdyn/errors.hpp"

namespace expdyn {

namespace {

using nlohmann::json;

double need_number(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number())
        throw InvalidParameter(std::string("missing or non-numeric field \"") + key + "\"");
    return j[key].get<double>();
}

std::uint64_t seed_or_zero(const json& j) {
    if (!j.contains("seed")) return 0;
    if (!j["seed"].is_number_unsigned())
        throw InvalidParameter("\"seed\" must be a nonnegative integer");
    return j["seed"].get<std::uint64_t>();
}

ParameterSequence from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw InvalidParameter("sequence spec needs a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();

    if (kind == "constant") return ParameterSequence::constant(need_number(j, "lambda"));
    if (kind == "uniform_random")
        return ParameterSequence::uniform_random(need_number(j, "delta"), seed_or_zero(j));
    if (kind == "borel_random") {
        if (!j.contains("cdf") || !j["cdf"].is_array())
            throw InvalidParameter("\"cdf\" must be an array of [x, F] pairs");
        std::vector<std::array<double, 2>> knots;
        for (const auto& k : j["cdf"]) {
            if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
                throw InvalidParameter("\"cdf\" must be an array of [x, F] pairs");
            knots.push_back({k[0].get<double>(), k[1].get<double>()});
        }
        return ParameterSequence::borel_random(PiecewiseLinearCdf(std::move(knots)),
                                               seed_or_zero(j));
    }
    if (kind == "power_law")
        return ParameterSequence::power_law(need_number(j, "p"), need_number(j, "c"));
    if (kind == "critical_exact") return ParameterSequence::critical_exact();
    if (kind == "block_repeat") return ParameterSequence::block_repeat();
    if (kind == "adaptive_escape") {
        AdaptiveConfig cfg;
        if (j.contains("rect")) {
            const auto& r = j["rect"];
            if (!r.is_array() || r.size() != 4)
                throw InvalidParameter("\"rect\" must be [re_lo, im_lo, re_hi, im_hi]");
            cfg.rect_lo = {r[0].get<double>(), r[1].get<double>()};
            cfg.rect_hi = {r[2].get<double>(), r[3].get<double>()};
        }
        if (j.contains("grid")) {
            const auto& g = j["grid"];
            if (!g.is_array() || g.size() != 2)
                throw InvalidParameter("\"grid\" must be [nx, ny]");
            cfg.grid_x = g[0].get<int>();
            cfg.grid_y = g[1].get<int>();
        }
        if (j.contains("blocks")) cfg.blocks = j["blocks"].get<int>();
        if (j.contains("eps0")) cfg.eps0 = need_number(j, "eps0");
        return ParameterSequence::adaptive_escape(cfg);
    }
    throw InvalidParameter("unknown sequence kind \"" + kind + "\"");
}

}  // namespace

ParameterSequence parse_sequence_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InvalidParameter(std::string("sequence spec is not valid JSON: ") + e.what());
    }
    return from_json(j);
}

ParameterSequence load_sequence_spec(const std::string& spec) {
    const auto first = spec.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && spec[first] == '{') return parse_sequence_json(spec);
    std::ifstream in(spec);
    if (!in) throw InvalidParameter("cannot open sequence spec file " + spec);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_sequence_json(text.str());
}

}  // namespace expdyn
