#pragma once

// JSON files: vault (attacker-visible), ground truth, templates and reports.
// The vault writer is hand-rolled so that key order and number formatting
// are byte-stable; everything is read through nlohmann::json.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "attack.hpp"
#include "errors.hpp"
#include "field.hpp"
#include "geometry.hpp"
#include "unlock.hpp"
#include "vault.hpp"

namespace fvault {

using OrderedJson = nlohmann::ordered_json;

inline std::string format_beta(double beta) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9f", beta);
    return buf;
}

inline bool is_default_frame(const Frame& f) { return f == Frame{}; }

// {"q","k","d","grid","quiz_n","points":[{"x","y","Y","beta"?}]}; "w"/"h"
// are written before "points" only for a non-default frame.
inline std::string vault_to_json(const Vault& v) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"q\": " << v.q << ",\n";
    os << "  \"k\": " << v.k << ",\n";
    os << "  \"d\": " << v.d << ",\n";
    os << "  \"grid\": \"" << to_string(v.grid) << "\",\n";
    os << "  \"quiz_n\": " << v.quiz_n << ",\n";
    if (!is_default_frame(v.frame)) {
        os << "  \"w\": " << v.frame.width << ",\n";
        os << "  \"h\": " << v.frame.height << ",\n";
    }
    os << "  \"points\": [";
    for (std::size_t i = 0; i < v.records.size(); ++i) {
        const auto& rec = v.records[i];
        os << (i == 0 ? "\n" : ",\n") << "    {\"x\": " << rec.x << ", \"y\": " << rec.y << ", \"Y\": " << rec.value.value;
        if (v.quiz_n > 0) os << ", \"beta\": " << format_beta(rec.beta.value_or(0.0));
        os << "}";
    }
    os << (v.records.empty() ? "]\n" : "\n  ]\n");
    os << "}\n";
    return os.str();
}

namespace detail {

template <class T>
T required(const nlohmann::json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw FormatError(std::string("field \"") + key + "\" has the wrong type");
    }
}

inline nlohmann::json parse(const std::string& text, const char* what) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed ") + what + " JSON: " + e.what());
    }
}

}  // namespace detail

inline Vault vault_from_json(const std::string& text) {
    const auto j = detail::parse(text, "vault");
    Vault v;
    v.q = detail::required<std::uint32_t>(j, "q");
    v.k = detail::required<std::size_t>(j, "k");
    v.d = detail::required<int>(j, "d");
    v.grid = parse_grid_kind(detail::required<std::string>(j, "grid"));
    v.quiz_n = detail::required<std::uint32_t>(j, "quiz_n");
    if (j.contains("w")) v.frame.width = detail::required<int>(j, "w");
    if (j.contains("h")) v.frame.height = detail::required<int>(j, "h");
    const Field field(v.q);
    if (v.k == 0) throw FormatError("vault k must be positive");
    if (v.quiz_n == 1) throw FormatError("vault quiz_n must be 0 or at least 2");
    if (max_concat(v.frame) >= v.q) throw FormatError("vault frame does not embed into F_q");
    if (!j.contains("points")) throw FormatError("missing field \"points\"");
    const auto& points = j.at("points");
    if (!points.is_array()) throw FormatError("\"points\" must be an array");
    for (const auto& p : points) {
        VaultRecord rec;
        rec.x = detail::required<int>(p, "x");
        rec.y = detail::required<int>(p, "y");
        const auto value = detail::required<std::uint64_t>(p, "Y");
        if (value >= v.q) throw FormatError("vault ordinate outside F_q");
        rec.value = Element{static_cast<std::uint32_t>(value)};
        if (!in_frame(rec.pixel(), v.frame)) throw FormatError("vault point outside the frame");
        if (v.quiz_n > 0) {
            rec.beta = detail::required<double>(p, "beta");
        } else if (p.contains("beta")) {
            throw FormatError("\"beta\" present on a vault without quiz");
        }
        v.records.push_back(rec);
    }
    return v;
}

inline OrderedJson template_to_json_value(const Template& tpl) {
    OrderedJson j;
    j["w"] = tpl.frame.width;
    j["h"] = tpl.frame.height;
    j["minutiae"] = OrderedJson::array();
    for (const auto& m : tpl.minutiae) j["minutiae"].push_back({{"x", m.x}, {"y", m.y}, {"theta", m.theta}});
    return j;
}

inline std::string template_to_json(const Template& tpl) { return template_to_json_value(tpl).dump(2) + "\n"; }

inline Template template_from_json_value(const nlohmann::json& j) {
    Template tpl;
    tpl.frame.width = detail::required<int>(j, "w");
    tpl.frame.height = detail::required<int>(j, "h");
    if (tpl.frame.width <= 0 || tpl.frame.height <= 0) throw FormatError("template frame must be non-empty");
    if (!j.contains("minutiae") || !j.at("minutiae").is_array()) throw FormatError("\"minutiae\" must be an array");
    for (const auto& m : j.at("minutiae")) {
        Minutia mm{detail::required<int>(m, "x"), detail::required<int>(m, "y"), detail::required<double>(m, "theta")};
        if (!in_frame(mm.pixel(), tpl.frame)) throw FormatError("minutia outside the frame");
        tpl.minutiae.push_back(mm);
    }
    return tpl;
}

inline Template template_from_json(const std::string& text) {
    return template_from_json_value(detail::parse(text, "template"));
}

inline std::string truth_to_json(const GroundTruth& truth) {
    OrderedJson j;
    j["secret_hex"] = truth.secret.hex();
    j["l"] = truth.secret.bits;
    j["f_coeffs"] = OrderedJson::array();
    for (Element c : truth.f.coeffs) j["f_coeffs"].push_back(c.value);
    j["t"] = truth.t;
    j["genuine_indices"] = truth.genuine_indices;
    j["template"] = template_to_json_value(truth.enrollment);
    j["seed"] = truth.seed;
    return j.dump(2) + "\n";
}

inline GroundTruth truth_from_json(const std::string& text) {
    const auto j = detail::parse(text, "ground truth");
    GroundTruth truth;
    truth.secret = Secret::from_hex(detail::required<std::string>(j, "secret_hex"), detail::required<std::size_t>(j, "l"));
    for (auto c : detail::required<std::vector<std::uint32_t>>(j, "f_coeffs")) truth.f.coeffs.push_back(Element{c});
    truth.t = detail::required<std::size_t>(j, "t");
    truth.genuine_indices = detail::required<std::vector<std::size_t>>(j, "genuine_indices");
    if (!j.contains("template")) throw FormatError("missing field \"template\"");
    truth.enrollment = template_from_json_value(j.at("template"));
    truth.seed = detail::required<std::uint64_t>(j, "seed");
    return truth;
}

// Wall time goes into the report only on request so that replays are
// byte-identical by default.
inline std::string attack_report_to_json(const AttackReport& rep, bool include_timing) {
    OrderedJson j;
    j["success"] = rep.success;
    if (rep.recovered_secret) j["secret_hex"] = rep.recovered_secret->hex();
    j["trials"] = rep.trials;
    j["interpolations"] = rep.interpolations;
    j["point_checks"] = rep.point_checks;
    j["elapsed_ms"] = include_timing ? std::round(rep.elapsed_ms * 1000.0) / 1000.0 : 0.0;
    j["seed"] = rep.seed;
    j["workers"] = rep.workers;
    return j.dump(2) + "\n";
}

inline std::string unlock_report_to_json(const UnlockResult& res, bool include_timing) {
    OrderedJson j;
    j["success"] = res.success;
    if (res.secret) j["secret_hex"] = res.secret->hex();
    j["candidates"] = res.candidates;
    j["interpolations"] = res.interpolations;
    j["elapsed_ms"] = include_timing ? std::round(res.elapsed_ms * 1000.0) / 1000.0 : 0.0;
    j["seed"] = res.seed;
    return j.dump(2) + "\n";
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParameterError("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParameterError("cannot write " + path);
    out << content;
}

}  // namespace fvault
