#pragma once

// Comparison scorers: keyword overlap, tf-idf cosine (VSM) and plain BLEU
// (ERB).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "asags/error.hpp"
#include "asags/scoring.hpp"
#include "asags/text.hpp"

namespace asags {

// ---------------------------------------------------------------------------
// Keywords

namespace detail {

inline std::set<std::string> distinct_stems(const ProcessedText& t) {
    std::set<std::string> out;
    for (const auto& tok : t.content_tokens) out.insert(tok.stem);
    return out;
}

}  // namespace detail

/// Best fraction of a reference's distinct content stems that the student
/// also uses. References without content are skipped.
inline double keyword_score(const ProcessedText& student, std::span<const ProcessedText* const> references) {
    if (references.empty()) throw InputError("keyword_score needs at least one reference");
    const auto mine = detail::distinct_stems(student);
    std::optional<double> best;
    for (const auto* ref : references) {
        const auto theirs = detail::distinct_stems(*ref);
        if (theirs.empty()) continue;
        std::size_t shared = 0;
        for (const auto& s : theirs) shared += mine.count(s);
        double v = static_cast<double>(shared) / static_cast<double>(theirs.size());
        best = std::max(best.value_or(0.0), v);
    }
    if (!best) throw InputError("no reference with content tokens");
    return *best;
}

// ---------------------------------------------------------------------------
// VSM

struct TfIdfModel {
    std::map<std::string, std::size_t> document_frequency;
    std::size_t document_count = 0;

    /// ln(D / df); ln(D + 1) for terms never seen in training.
    double idf(const std::string& term) const {
        auto it = document_frequency.find(term);
        if (it == document_frequency.end()) return std::log(static_cast<double>(document_count) + 1.0);
        return std::log(static_cast<double>(document_count) / static_cast<double>(it->second));
    }

    bool contains(const std::string& term) const { return document_frequency.count(term) != 0; }
};

/// Returned by fit_tfidf when the training split cannot support a model.
struct TrainingInfeasible {
    std::string reason;
};

/// Document frequencies over the training answers' content stems. Needs at
/// least two answers with content.
inline std::optional<TfIdfModel> fit_tfidf(std::span<const ProcessedText* const> training,
                                           TrainingInfeasible* why = nullptr) {
    TfIdfModel m;
    for (const auto* doc : training) {
        if (doc->content_tokens.empty()) continue;
        ++m.document_count;
        for (const auto& s : detail::distinct_stems(*doc)) ++m.document_frequency[s];
    }
    auto fail = [&](std::string reason) -> std::optional<TfIdfModel> {
        if (why) why->reason = std::move(reason);
        return std::nullopt;
    };
    if (m.document_frequency.empty()) return fail("empty vocabulary");
    if (m.document_count < 2) return fail("fewer than 2 training answers with content");
    return m;
}

namespace detail {

inline std::map<std::string, double> tfidf_vector(const ProcessedText& t, const TfIdfModel& m) {
    std::map<std::string, double> v;
    for (const auto& tok : t.content_tokens) v[tok.stem] += 1.0;
    for (auto& [term, w] : v) w *= m.idf(term);
    return v;
}

inline double cosine(const std::map<std::string, double>& a, const std::map<std::string, double>& b) {
    double dot = 0, na = 0, nb = 0;
    for (const auto& [k, x] : a) {
        na += x * x;
        if (auto it = b.find(k); it != b.end()) dot += x * it->second;
    }
    for (const auto& [k, y] : b) nb += y * y;
    if (na == 0 || nb == 0) return 0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), 0.0, 1.0);
}

}  // namespace detail

/// Best cosine similarity between the tf·idf vectors (raw stem counts) of
/// the student and each reference; 0 for a zero vector on either side.
inline double vsm_score(const ProcessedText& student, std::span<const ProcessedText* const> references,
                        const TfIdfModel& model) {
    const auto sv = detail::tfidf_vector(student, model);
    double best = 0;
    for (const auto* ref : references) best = std::max(best, detail::cosine(sv, detail::tfidf_vector(*ref, model)));
    return best;
}

// ---------------------------------------------------------------------------
// ERB (plain BLEU)

inline constexpr int kErbDefaultMaxN = 3;

/// BLEU over exact (case-folded) content tokens: geometric mean of clipped
/// precisions 1..N times the brevity penalty against the closest reference
/// length. Orders longer than the candidate are dropped with their weights
/// renormalised; any zero precision gives 0.
inline double erb_score(const ProcessedText& student, std::span<const ProcessedText* const> references,
                        int max_n = kErbDefaultMaxN) {
    if (references.empty()) throw InputError("erb_score needs at least one reference");
    if (max_n < 1) throw InputError("max_n must be >= 1");
    const auto c = student.content_tokens.size();
    if (c == 0) return 0;
    double log_sum = 0;
    int orders = 0;
    for (int n = 1; n <= max_n; ++n) {
        const auto un = static_cast<std::size_t>(n);
        if (c < un) break;
        const auto clipped = clipped_ngram_count(student, references, un, NgramKey::normalized);
        if (clipped == 0) return 0;
        log_sum += std::log(static_cast<double>(clipped) / static_cast<double>(c - un + 1));
        ++orders;
    }
    // closest reference length, shorter on ties
    std::size_t r = references.front()->content_tokens.size();
    for (const auto* ref : references) {
        const auto len = ref->content_tokens.size();
        const auto d_new = len > c ? len - c : c - len;
        const auto d_old = r > c ? r - c : c - r;
        if (d_new < d_old || (d_new == d_old && len < r)) r = len;
    }
    return std::min(1.0, brevity_penalty(c, r) * std::exp(log_sum / orders));
}

// ---------------------------------------------------------------------------
// five-fold protocol

inline constexpr std::size_t kFolds = 5;

struct FoldPlan {
    std::vector<std::size_t> fold_of;  // answer index -> fold

    std::vector<std::size_t> members(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < fold_of.size(); ++i)
            if (fold_of[i] == fold) out.push_back(i);
        return out;
    }
};

/// Fisher-Yates over mt19937_64 with rejection sampling, then round-robin
/// fold assignment. Identical for a given seed on every standard library.
inline FoldPlan make_fold_plan(std::size_t answer_count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto bounded = [&](std::uint64_t bound) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t x;
        do x = rng();
        while (x >= limit);
        return x % bound;
    };
    std::vector<std::size_t> order(answer_count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = answer_count; i > 1; --i) std::swap(order[i - 1], order[bounded(i)]);
    FoldPlan plan;
    plan.fold_of.assign(answer_count, 0);
    for (std::size_t rank = 0; rank < answer_count; ++rank) plan.fold_of[order[rank]] = rank % kFolds;
    return plan;
}

struct FiveFoldResult {
    bool evaluable = false;
    std::string reason;                            // set when not evaluable
    std::vector<double> scores;                    // mean of the runs that scored each answer
    std::vector<std::vector<double>> fold_scores;  // per answer, one entry per scoring fold
    FoldPlan plan;
};

/// Each fold in turn trains the tf-idf model (its 20%) and the other folds
/// are scored, so every answer is scored four times and keeps the mean.
inline FiveFoldResult five_fold_evaluate(std::span<const ProcessedText> answers,
                                         std::span<const ProcessedText* const> references, std::uint64_t seed) {
    FiveFoldResult out;
    out.plan = make_fold_plan(answers.size(), seed);
    std::size_t scoreable = 0;
    for (const auto& a : answers) scoreable += a.content_tokens.empty() ? 0 : 1;
    if (scoreable < kFolds) {
        out.reason = "fewer than 5 scoreable answers";
        return out;
    }
    out.fold_scores.assign(answers.size(), {});
    for (std::size_t f = 0; f < kFolds; ++f) {
        std::vector<const ProcessedText*> training;
        for (auto i : out.plan.members(f)) training.push_back(&answers[i]);
        TrainingInfeasible why;
        auto model = fit_tfidf(training, &why);
        if (!model) {
            out.reason = "fold " + std::to_string(f) + ": " + why.reason;
            out.fold_scores.clear();
            return out;
        }
        for (std::size_t i = 0; i < answers.size(); ++i)
            if (out.plan.fold_of[i] != f) out.fold_scores[i].push_back(vsm_score(answers[i], references, *model));
    }
    out.scores.reserve(answers.size());
    for (const auto& s : out.fold_scores)
        out.scores.push_back(std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size()));
    out.evaluable = true;
    return out;
}

}  // namespace asags
