#pragma once

// Shared test helpers: fixture paths, independent oracles and random input
// generators. Oracles here never call the library code they check.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "asags/asags.hpp"

#ifndef ASAGS_DATA_DIR
#error "ASAGS_DATA_DIR must point at the data/ directory"
#endif

namespace testing_support {

inline std::string data_path(const std::string& rel) { return std::string(ASAGS_DATA_DIR) + "/" + rel; }

inline const asags::StopList& no_stopwords() {
    static const asags::StopList empty;
    return empty;
}

inline asags::ProcessedText text(const std::string& raw, const asags::StopList& stops = no_stopwords()) {
    return asags::preprocess(raw, stops);
}

inline asags::ProcessedText from_words(const std::vector<std::string>& words) {
    std::string raw;
    for (const auto& w : words) raw += (raw.empty() ? "" : " ") + w;
    return asags::preprocess(raw, no_stopwords());
}

inline const asags::StopList& bundled_stoplist() {
    static const auto s = asags::load_stoplist(data_path("stopwords.txt"));
    return s;
}

inline const asags::Resources& bundled_resources() {
    static const auto r = asags::load_resources(asags::ResourcePaths::in_directory(ASAGS_DATA_DIR));
    return r;
}

inline asags::Grader bundled_grader() {
    asags::Grader g;
    g.stoplist = bundled_stoplist();
    g.resources = bundled_resources();
    return g;
}

inline std::vector<asags::PreparedDataset> fixture_datasets(const asags::StopList& stops = bundled_stoplist()) {
    std::vector<asags::PreparedDataset> out;
    for (const char* name : {"fixture/stack.json", "fixture/osi.json"})
        out.push_back(asags::prepare(asags::load_dataset(data_path(name)), stops));
    return out;
}

// --------------------------------------------------------------------------
// oracles

// Clipped n-gram count by explicit multiset enumeration: every n-gram of the
// candidate is tallied in a map, every reference likewise, and each distinct
// candidate n-gram contributes min(own count, max reference count).
using Gram = std::vector<std::string>;
using GramTally = std::map<Gram, std::size_t>;

inline GramTally oracle_tally(const std::vector<std::string>& seq, std::size_t n) {
    GramTally counts;
    if (seq.size() < n) return counts;
    for (std::size_t i = 0; i + n <= seq.size(); ++i) ++counts[Gram(seq.begin() + i, seq.begin() + i + n)];
    return counts;
}

inline std::size_t oracle_clip(const GramTally& candidate, const std::vector<const GramTally*>& references) {
    std::size_t total = 0;
    for (const auto& [g, c] : candidate) {
        std::size_t best = 0;
        for (const auto* ref : references) {
            auto it = ref->find(g);
            if (it != ref->end()) best = std::max(best, it->second);
        }
        total += std::min(c, best);
    }
    return total;
}

inline std::size_t oracle_clipped_count(const std::vector<std::string>& candidate,
                                        const std::vector<std::vector<std::string>>& references, std::size_t n) {
    std::vector<GramTally> tallies;
    for (const auto& r : references) tallies.push_back(oracle_tally(r, n));
    std::vector<const GramTally*> ptrs;
    for (const auto& t : tallies) ptrs.push_back(&t);
    return oracle_clip(oracle_tally(candidate, n), ptrs);
}

// Pearson via the pairwise-difference identity
//   r = Σ_{i<j} (xi−xj)(yi−yj) / sqrt(Σ_{i<j} (xi−xj)² · Σ_{i<j} (yi−yj)²)
// in long double; shares no intermediate quantity with the mean-centred form.
inline std::optional<long double> oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    long double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            const long double dx = static_cast<long double>(x[i]) - x[j];
            const long double dy = static_cast<long double>(y[i]) - y[j];
            sxy += dx * dy;
            sxx += dx * dx;
            syy += dy * dy;
        }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// --------------------------------------------------------------------------
// generators

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::string> random_words(Rng& rng, std::size_t len, const std::vector<std::string>& alphabet) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < len; ++i) out.push_back(alphabet[uniform(rng, 0, alphabet.size() - 1)]);
    return out;
}

// Every sequence of exactly `len` symbols over an alphabet of size k, as
// index vectors in lexicographic order.
inline std::vector<std::vector<std::size_t>> all_sequences(std::size_t len, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> cur(len, 0);
    while (true) {
        out.push_back(cur);
        std::size_t i = len;
        while (i > 0 && ++cur[i - 1] == k) cur[--i] = 0;
        if (i == 0) break;
    }
    return out;
}

// Vocabulary mixing plain words, inflections that share stems, fixture
// lexicon members, numbers and acronyms, so every matcher stage can fire.
inline const std::vector<std::string>& rich_vocabulary() {
    static const std::vector<std::string> v = {
        "stack",   "stacks",  "pile",    "push",      "pushed",   "pop",       "popping",  "element",
        "item",    "items",   "top",     "layer",     "level",    "seven",     "seventh",  "7",
        "7th",     "OSI",     "open",    "systems",   "interconnection", "interconnect", "provide",
        "supply",  "chennai", "madras",  "india",     "indian",   "removal",   "remove",   "delete",
        "queue",   "array",   "linear",  "structure", "data",     "network",   "user",     "twenty-one",
        "21",      "NLP",     "natural", "language",  "processing"};
    return v;
}

}  // namespace testing_support
