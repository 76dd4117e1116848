#pragma once

// `key = value` configuration files. Scoring keys: max_n, weights, alpha,
// gamma, beta, brevity, combination, component, stages.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asags/alignment.hpp"
#include "asags/error.hpp"
#include "asags/scoring.hpp"

namespace asags {

using KeyValues = std::vector<std::pair<std::string, std::string>>;

inline KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>") {
    KeyValues out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = detail::trim(view);
        if (view.empty()) continue;
        auto eq = view.find('=');
        if (eq == std::string_view::npos) throw LoadError(source, lineno, "expected 'key = value'");
        auto key = detail::to_lower(detail::trim(view.substr(0, eq)));
        if (key.empty()) throw LoadError(source, lineno, "empty key");
        out.emplace_back(std::move(key), std::string(detail::trim(view.substr(eq + 1))));
    }
    return out;
}

inline KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open config file: " + path);
    return parse_key_values(in, path);
}

namespace detail {

inline double parse_double(std::string_view key, std::string_view v) {
    double d = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw InputError(std::string(key) + ": not a number: '" + std::string(v) + "'");
    return d;
}

inline long long parse_int(std::string_view key, std::string_view v) {
    long long i = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), i);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw InputError(std::string(key) + ": not an integer: '" + std::string(v) + "'");
    return i;
}

inline bool parse_bool(std::string_view key, std::string_view v) {
    auto l = to_lower(v);
    if (l == "true" || l == "on" || l == "yes" || l == "1") return true;
    if (l == "false" || l == "off" || l == "no" || l == "0") return false;
    throw InputError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

inline std::string format_double(double d) {
    std::ostringstream out;
    out.precision(17);
    out << d;
    return out.str();
}

}  // namespace detail

inline ReferenceCombination parse_combination(std::string_view v) {
    auto l = detail::to_lower(detail::trim(v));
    if (l == "best" || l == "best_reference" || l == "bestreference") return ReferenceCombination::best_reference;
    if (l == "average" || l == "weighted_average" || l == "weightedaverage") return ReferenceCombination::weighted_average;
    throw InputError("combination must be 'best' or 'average', got '" + std::string(v) + "'");
}

inline ScoreComponent parse_component(std::string_view v) {
    auto l = detail::to_lower(detail::trim(v));
    if (l == "precision") return ScoreComponent::precision;
    if (l == "recall") return ScoreComponent::recall;
    if (l == "fmean" || l == "f_mean") return ScoreComponent::fmean;
    if (l == "penalized" || l == "penalized_fmean") return ScoreComponent::penalized;
    if (l == "full") return ScoreComponent::full;
    throw InputError("unknown score component '" + std::string(v) + "'");
}

/// Applies one scoring key. Returns false for keys it does not know.
inline bool apply_scoring_option(ScoringConfig& config, StageList& stages, std::string_view key, std::string_view value) {
    if (key == "max_n") {
        config.max_n = static_cast<int>(detail::parse_int(key, value));
    } else if (key == "weights") {
        config.ngram_weights.clear();
        if (!detail::trim(value).empty())
            for (const auto& w : detail::split(value, ',')) config.ngram_weights.push_back(detail::parse_double(key, w));
    } else if (key == "alpha") {
        config.alpha = detail::parse_double(key, value);
    } else if (key == "gamma") {
        config.gamma = detail::parse_double(key, value);
    } else if (key == "beta") {
        config.beta = detail::parse_double(key, value);
    } else if (key == "brevity") {
        config.use_brevity_penalty = detail::parse_bool(key, value);
    } else if (key == "combination") {
        config.combination = parse_combination(value);
    } else if (key == "component") {
        config.component = parse_component(value);
    } else if (key == "stages") {
        stages = parse_stages(value);
    } else {
        return false;
    }
    return true;
}

/// Canonical text form; parsing it back reproduces the configuration.
inline std::string serialize_scoring(const ScoringConfig& config, const StageList& stages) {
    std::ostringstream out;
    out << "max_n = " << config.max_n << '\n';
    out << "weights = ";
    const auto w = config.weights();
    for (std::size_t i = 0; i < w.size(); ++i) out << (i ? "," : "") << detail::format_double(w[i]);
    out << '\n';
    out << "alpha = " << detail::format_double(config.alpha) << '\n';
    out << "gamma = " << detail::format_double(config.gamma) << '\n';
    out << "beta = " << detail::format_double(config.beta) << '\n';
    out << "brevity = " << (config.use_brevity_penalty ? "true" : "false") << '\n';
    out << "combination = " << to_string(config.combination) << '\n';
    out << "component = " << to_string(config.component) << '\n';
    out << "stages = " << format_stages(stages) << '\n';
    return out.str();
}

/// FNV-1a, 64 bit, rendered as 16 hex digits.
inline std::string digest(std::string_view text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

}  // namespace asags
