#pragma once

// Enhanced-BLEU scoring: clipped n-gram precision per reference, unigram
// recall, recall-weighted F-mean, fragmentation and brevity penalties,
// reference combination, and the mapping onto a teacher's grade scale.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iomanip>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "asags/alignment.hpp"
#include "asags/error.hpp"
#include "asags/lexicon.hpp"
#include "asags/text.hpp"

namespace asags {

enum class ReferenceCombination { best_reference, weighted_average };

/// Which quantity a reference score reports. `full` is the engine's score,
/// brevity · (1 − penalty) · F; the others isolate components for comparison
/// runs. `penalized` is (1 − penalty) · F, without the brevity factor.
enum class ScoreComponent { precision, recall, fmean, penalized, full };

inline std::string_view to_string(ReferenceCombination c) {
    return c == ReferenceCombination::best_reference ? "best" : "average";
}

inline std::string_view to_string(ScoreComponent c) {
    switch (c) {
        case ScoreComponent::precision: return "precision";
        case ScoreComponent::recall: return "recall";
        case ScoreComponent::fmean: return "fmean";
        case ScoreComponent::penalized: return "penalized_fmean";
        case ScoreComponent::full: return "full";
    }
    return "?";
}

struct ScoringConfig {
    int max_n = 3;
    std::vector<double> ngram_weights;  // empty: uniform over 1..max_n
    double alpha = 0.9;                 // F = P·R / (α·P + (1−α)·R); 0.9 favours recall 9:1
    double gamma = 0.5;
    double beta = 3.0;
    bool use_brevity_penalty = true;
    ReferenceCombination combination = ReferenceCombination::best_reference;
    ScoreComponent component = ScoreComponent::full;

    /// Throws InputError on out-of-range values.
    void validate() const {
        if (max_n < 1 || max_n > 4) throw InputError("max_n must be in [1,4], got " + std::to_string(max_n));
        if (!ngram_weights.empty()) {
            if (ngram_weights.size() != static_cast<std::size_t>(max_n))
                throw InputError("expected " + std::to_string(max_n) + " n-gram weights, got " +
                                 std::to_string(ngram_weights.size()));
            double sum = 0;
            for (double w : ngram_weights) {
                if (!(w >= 0) || !std::isfinite(w)) throw InputError("n-gram weights must be finite and >= 0");
                sum += w;
            }
            if (!(sum > 0)) throw InputError("n-gram weights must not all be zero");
        }
        if (!(alpha > 0 && alpha < 1)) throw InputError("alpha must be in (0,1)");
        if (!(gamma >= 0 && gamma <= 1)) throw InputError("gamma must be in [0,1]");
        if (!(beta >= 0) || !std::isfinite(beta)) throw InputError("beta must be >= 0");
    }

    /// Weights w_1..w_N normalised to sum to 1.
    std::vector<double> weights() const {
        std::vector<double> w = ngram_weights;
        if (w.empty()) w.assign(static_cast<std::size_t>(max_n), 1.0);
        double sum = std::accumulate(w.begin(), w.end(), 0.0);
        for (auto& x : w) x /= sum;
        return w;
    }
};

// ---------------------------------------------------------------------------
// n-gram counting

/// How tokens are compared when counting n-grams of length >= 2.
enum class NgramKey { normalized, stem };

inline NgramKey ngram_key_for(const StageList& stages) {
    for (const auto& s : stages)
        if (s.kind == StageKind::stem) return NgramKey::stem;
    return NgramKey::normalized;
}

namespace detail {

inline const std::string& key_of(const Token& t, NgramKey k) {
    return k == NgramKey::stem ? t.stem : t.normalized;
}

inline bool ngram_equal(std::span<const Token> a, std::size_t i, std::span<const Token> b, std::size_t j,
                        std::size_t n, NgramKey k) {
    for (std::size_t o = 0; o < n; ++o)
        if (key_of(a[i + o], k) != key_of(b[j + o], k)) return false;
    return true;
}

inline std::size_t occurrences(std::span<const Token> haystack, std::span<const Token> needle_src, std::size_t at,
                               std::size_t n, NgramKey k) {
    if (haystack.size() < n) return 0;
    std::size_t c = 0;
    for (std::size_t j = 0; j + n <= haystack.size(); ++j)
        if (ngram_equal(haystack, j, needle_src, at, n, k)) ++c;
    return c;
}

}  // namespace detail

/// Sum over distinct candidate n-grams of min(count in candidate, max count
/// in any one reference), over content tokens.
inline std::size_t clipped_ngram_count(const ProcessedText& candidate, std::span<const ProcessedText* const> references,
                                       std::size_t n, NgramKey key = NgramKey::normalized) {
    if (n == 0) throw InputError("n-gram order must be >= 1");
    std::span<const Token> cand(candidate.content_tokens);
    if (cand.size() < n) return 0;
    std::size_t total = 0;
    for (std::size_t i = 0; i + n <= cand.size(); ++i) {
        bool seen = false;
        for (std::size_t p = 0; p < i && !seen; ++p) seen = detail::ngram_equal(cand, p, cand, i, n, key);
        if (seen) continue;
        const auto in_candidate = detail::occurrences(cand, cand, i, n, key);
        std::size_t max_ref = 0;
        for (const auto* ref : references)
            max_ref = std::max(max_ref, detail::occurrences(std::span<const Token>(ref->content_tokens), cand, i, n, key));
        total += std::min(in_candidate, max_ref);
    }
    return total;
}

inline std::size_t clipped_ngram_count(const ProcessedText& candidate, const ProcessedText& reference, std::size_t n,
                                       NgramKey key = NgramKey::normalized) {
    const ProcessedText* refs[] = {&reference};
    return clipped_ngram_count(candidate, refs, n, key);
}

/// p_n against one reference. For n = 1 the numerator is the number of
/// aligned candidate positions (so heuristic matches count); for n >= 2 it is
/// the clipped n-gram count under `key`. Absent when the candidate has fewer
/// than n content tokens.
inline std::optional<double> modified_precision(const ProcessedText& candidate, const ProcessedText& reference,
                                                const Alignment& alignment, std::size_t n, NgramKey key) {
    const auto len = candidate.content_tokens.size();
    if (n == 0) throw InputError("n-gram order must be >= 1");
    if (len < n) return std::nullopt;
    if (n == 1) return static_cast<double>(alignment.matched_student_count()) / static_cast<double>(len);
    return static_cast<double>(clipped_ngram_count(candidate, reference, n, key)) / static_cast<double>(len - n + 1);
}

inline std::optional<double> modified_precision(const ProcessedText& candidate, const ProcessedText& reference,
                                                std::size_t n, const StageList& stages, const Resources& resources) {
    auto a = align(candidate, reference, stages, resources);
    return modified_precision(candidate, reference, a, n, ngram_key_for(stages));
}

// ---------------------------------------------------------------------------
// components

inline double recall(const Alignment& alignment) {
    if (alignment.reference_len == 0) throw InputError("recall of an empty reference");
    return static_cast<double>(alignment.matched_reference_count()) / static_cast<double>(alignment.reference_len);
}

/// P·R / (α·P + (1−α)·R); 0 when both are 0.
inline double f_mean(double precision, double recall, double alpha) {
    const double denom = alpha * precision + (1 - alpha) * recall;
    if (precision == 0 || recall == 0 || denom == 0) return 0;
    return precision * recall / denom;
}

/// γ·(chunks / matched)^β over student positions; 0 without matches.
inline double chunk_penalty(const Alignment& alignment, double gamma, double beta) {
    const auto matched = alignment.matched_student_count();
    if (alignment.pairs.empty() || matched == 0) return 0;
    return gamma * std::pow(static_cast<double>(alignment.chunk_count) / static_cast<double>(matched), beta);
}

inline double brevity_penalty(std::size_t candidate_len, std::size_t reference_len) {
    if (candidate_len == 0) return 0;
    if (candidate_len >= reference_len) return 1;
    return std::exp(1.0 - static_cast<double>(reference_len) / static_cast<double>(candidate_len));
}

/// Σ w_n·p_n over the defined p_n, weights renormalised over those n.
/// Zero when no order is defined.
inline double weighted_precision(std::span<const std::optional<double>> precisions, std::span<const double> weights) {
    double num = 0;
    double wsum = 0;
    for (std::size_t i = 0; i < precisions.size() && i < weights.size(); ++i) {
        if (!precisions[i]) continue;
        num += weights[i] * *precisions[i];
        wsum += weights[i];
    }
    return wsum > 0 ? num / wsum : 0;
}

// ---------------------------------------------------------------------------

struct ReferenceScore {
    std::string reference_id;
    std::vector<std::optional<double>> precisions;  // p_1..p_N
    double precision = 0;
    double recall = 0;
    double fmean = 0;
    double chunk_penalty = 0;
    double brevity_penalty = 1;
    double score = 0;  // under the configured component
    bool degenerate = false;  // empty student content
    Alignment alignment;
};

/// Value of `component` for one reference.
inline double component_score(const ReferenceScore& r, ScoreComponent component, const ScoringConfig& config) {
    if (r.degenerate) return 0;
    const double bp = config.use_brevity_penalty ? r.brevity_penalty : 1.0;
    switch (component) {
        case ScoreComponent::precision: return bp * r.precision;
        case ScoreComponent::recall: return r.recall;
        case ScoreComponent::fmean: return r.fmean;
        case ScoreComponent::penalized: return (1 - r.chunk_penalty) * r.fmean;
        case ScoreComponent::full: return bp * (1 - r.chunk_penalty) * r.fmean;
    }
    return 0;
}

inline ReferenceScore score_against_reference(const ProcessedText& student, const ProcessedText& reference,
                                              std::string reference_id, const ScoringConfig& config,
                                              const StageList& stages, const Resources& resources) {
    if (reference.content_tokens.empty())
        throw InputError("reference '" + reference_id + "' has no content tokens");
    ReferenceScore r;
    r.reference_id = std::move(reference_id);
    r.alignment = align(student, reference, stages, resources);
    r.precisions.assign(static_cast<std::size_t>(config.max_n), std::nullopt);
    if (student.content_tokens.empty()) {
        r.degenerate = true;
        r.brevity_penalty = 0;
        return r;
    }
    const auto key = ngram_key_for(stages);
    for (int n = 1; n <= config.max_n; ++n)
        r.precisions[static_cast<std::size_t>(n - 1)] =
            modified_precision(student, reference, r.alignment, static_cast<std::size_t>(n), key);
    const auto w = config.weights();
    r.precision = weighted_precision(r.precisions, w);
    r.recall = recall(r.alignment);
    r.fmean = f_mean(r.precision, r.recall, config.alpha);
    r.chunk_penalty = chunk_penalty(r.alignment, config.gamma, config.beta);
    r.brevity_penalty = brevity_penalty(student.content_tokens.size(), reference.content_tokens.size());
    r.score = component_score(r, config.component, config);
    return r;
}

struct Combined {
    double score = 0;
    std::optional<std::size_t> chosen;  // best_reference only
};

/// Best reference (first on ties) or the weighted mean of the scores.
inline Combined combine_references(std::span<const double> scores, std::span<const double> weights,
                                   ReferenceCombination strategy) {
    if (scores.empty()) throw InputError("no reference scores to combine");
    if (strategy == ReferenceCombination::best_reference) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < scores.size(); ++i)
            if (scores[i] > scores[best]) best = i;
        return {scores[best], best};
    }
    if (weights.size() != scores.size()) throw InputError("one weight per reference required");
    double num = 0;
    double den = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!(weights[i] >= 0)) throw InputError("reference weights must be >= 0");
        num += weights[i] * scores[i];
        den += weights[i];
    }
    if (!(den > 0)) throw InputError("reference weights must not all be zero");
    return {num / den, std::nullopt};
}

struct ReferenceText {
    std::string id;
    ProcessedText text;
    double weight = 1.0;
};

struct ScoreBreakdown {
    std::vector<ReferenceScore> per_reference;
    double combined_score = 0;
    std::string chosen_reference;  // reference id, or "average"
    std::size_t best_index = 0;    // highest-scoring reference, for feedback
    bool degenerate = false;

    /// Recombines the cached per-reference results under another component.
    double combined(ScoreComponent component, const ScoringConfig& config, std::span<const double> weights) const {
        std::vector<double> s;
        s.reserve(per_reference.size());
        for (const auto& r : per_reference) s.push_back(component_score(r, component, config));
        return combine_references(s, weights, config.combination).score;
    }
};

/// Scores `student` against every reference with content and combines the
/// results. Throws InputError when no reference has content tokens.
inline ScoreBreakdown score_answer(const ProcessedText& student, std::span<const ReferenceText> references,
                                   const ScoringConfig& config, const StageList& stages, const Resources& resources) {
    config.validate();
    ScoreBreakdown b;
    std::vector<double> scores;
    std::vector<double> weights;
    for (const auto& ref : references) {
        if (ref.text.content_tokens.empty()) continue;
        b.per_reference.push_back(score_against_reference(student, ref.text, ref.id, config, stages, resources));
        scores.push_back(b.per_reference.back().score);
        weights.push_back(ref.weight);
    }
    if (b.per_reference.empty()) throw InputError("no reference with content tokens");
    b.degenerate = student.content_tokens.empty();
    auto c = combine_references(scores, weights, config.combination);
    b.combined_score = c.score;
    b.best_index = static_cast<std::size_t>(std::max_element(scores.begin(), scores.end()) - scores.begin());
    b.chosen_reference = c.chosen ? b.per_reference[*c.chosen].reference_id : std::string("average");
    return b;
}

// ---------------------------------------------------------------------------
// grades and feedback

struct GradeScale {
    double min_grade = 0;
    double max_grade = 5;

    void validate() const {
        if (!std::isfinite(min_grade) || !std::isfinite(max_grade) || !(min_grade < max_grade))
            throw InputError("grade scale needs min < max");
    }
    bool contains(double g) const { return g >= min_grade && g <= max_grade; }
};

inline double to_grade(double score, const GradeScale& scale) {
    const double s = std::clamp(score, 0.0, 1.0);
    return scale.min_grade + s * (scale.max_grade - scale.min_grade);
}

/// Half-up rounding to two decimals, for display.
inline std::string format_grade(double grade) {
    double rounded = std::floor(grade * 100.0 + 0.5 + 1e-9) / 100.0;
    if (rounded == 0) rounded = 0;  // no "-0.00"
    std::ostringstream out;
    out << std::fixed << std::setprecision(2) << rounded;
    return out.str();
}

struct Feedback {
    double grade = 0;
    std::string reference_id;
    std::vector<Token> matched_content;
    std::vector<Token> unmatched_reference_content;
};

/// Grade plus the credited student words and the reference words the answer
/// never covered, taken from the best-scoring reference's alignment.
/// `references` must be the list passed to score_answer.
inline Feedback feedback(const ScoreBreakdown& breakdown, const ProcessedText& student,
                         std::span<const ReferenceText> references, const GradeScale& scale) {
    Feedback f;
    f.grade = to_grade(breakdown.combined_score, scale);
    if (breakdown.per_reference.empty()) return f;
    const auto& best = breakdown.per_reference[breakdown.best_index];
    f.reference_id = best.reference_id;
    const ProcessedText* ref = nullptr;
    for (const auto& r : references)
        if (r.id == best.reference_id) ref = &r.text;
    const auto s_cov = best.alignment.student_coverage();
    for (std::size_t i = 0; i < s_cov.size() && i < student.content_tokens.size(); ++i)
        if (s_cov[i]) f.matched_content.push_back(student.content_tokens[i]);
    if (ref) {
        const auto r_cov = best.alignment.reference_coverage();
        for (std::size_t i = 0; i < r_cov.size() && i < ref->content_tokens.size(); ++i)
            if (!r_cov[i]) f.unmatched_reference_content.push_back(ref->content_tokens[i]);
    }
    return f;
}

}  // namespace asags
