#pragma once

// One-to-one unigram alignment between a student answer and a reference,
// built by running matcher stages in order over still-unmatched content
// tokens.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "asags/error.hpp"
#include "asags/lexicon.hpp"
#include "asags/text.hpp"

namespace asags {

enum class StageKind { exact, stem, heuristic };
enum class HeuristicRule { synonym, numeric, acronym, derivational, gazetteer };

inline constexpr HeuristicRule kDefaultRuleOrder[] = {HeuristicRule::synonym, HeuristicRule::numeric,
                                                      HeuristicRule::acronym, HeuristicRule::derivational,
                                                      HeuristicRule::gazetteer};

struct MatcherStage {
    StageKind kind = StageKind::exact;
    std::vector<HeuristicRule> rules;  // heuristic stages only

    static MatcherStage exact() { return {StageKind::exact, {}}; }
    static MatcherStage stem() { return {StageKind::stem, {}}; }
    static MatcherStage heuristic(std::vector<HeuristicRule> rules = {std::begin(kDefaultRuleOrder),
                                                                      std::end(kDefaultRuleOrder)}) {
        return {StageKind::heuristic, std::move(rules)};
    }

    friend bool operator==(const MatcherStage&, const MatcherStage&) = default;
};

using StageList = std::vector<MatcherStage>;

inline std::string_view to_string(StageKind k) {
    switch (k) {
        case StageKind::exact: return "exact";
        case StageKind::stem: return "stem";
        case StageKind::heuristic: return "heuristic";
    }
    return "?";
}

inline std::string_view to_string(HeuristicRule r) {
    switch (r) {
        case HeuristicRule::synonym: return "synonym";
        case HeuristicRule::numeric: return "numeric";
        case HeuristicRule::acronym: return "acronym";
        case HeuristicRule::derivational: return "derivational";
        case HeuristicRule::gazetteer: return "gazetteer";
    }
    return "?";
}

/// Throws InputError unless the list is non-empty, has no repeated stage
/// kind, and no heuristic stage repeats a rule or is empty.
inline void validate_stages(const StageList& stages) {
    if (stages.empty()) throw InputError("at least one matcher stage is required");
    for (std::size_t i = 0; i < stages.size(); ++i) {
        for (std::size_t j = i + 1; j < stages.size(); ++j)
            if (stages[i].kind == stages[j].kind)
                throw InputError("matcher stage '" + std::string(to_string(stages[i].kind)) + "' listed twice");
        if (stages[i].kind == StageKind::heuristic) {
            const auto& r = stages[i].rules;
            if (r.empty()) throw InputError("heuristic stage without rules");
            for (std::size_t a = 0; a < r.size(); ++a)
                for (std::size_t b = a + 1; b < r.size(); ++b)
                    if (r[a] == r[b]) throw InputError("heuristic rule '" + std::string(to_string(r[a])) + "' listed twice");
        }
    }
}

/// Parses e.g. `exact,stem,heuristic(synonym,numeric)`; case-insensitive,
/// whitespace ignored. A bare `heuristic` uses the default rule order.
inline StageList parse_stages(std::string_view text) {
    std::string s;
    for (char c : detail::to_lower(text))
        if (!detail::is_space(c)) s.push_back(c);
    StageList stages;
    std::size_t i = 0;
    auto fail = [&](const std::string& why) -> InputError {
        return InputError("bad stage list '" + std::string(text) + "': " + why);
    };
    while (i < s.size()) {
        auto end = s.find_first_of(",(", i);
        std::string name = s.substr(i, end == std::string::npos ? std::string::npos : end - i);
        if (name == "exact" || name == "stem" || name == "stemming" || name == "porter") {
            if (end != std::string::npos && s[end] == '(') throw fail("'" + name + "' takes no rules");
            stages.push_back(name == "exact" ? MatcherStage::exact() : MatcherStage::stem());
            i = end == std::string::npos ? s.size() : end + 1;
        } else if (name == "heuristic" || name == "heuristics") {
            if (end != std::string::npos && s[end] == '(') {
                auto close = s.find(')', end);
                if (close == std::string::npos) throw fail("missing ')'");
                std::vector<HeuristicRule> rules;
                for (const auto& r : detail::split(std::string_view(s).substr(end + 1, close - end - 1), ',')) {
                    bool found = false;
                    for (auto rule : kDefaultRuleOrder)
                        if (r == to_string(rule)) {
                            rules.push_back(rule);
                            found = true;
                        }
                    if (!found) throw fail("unknown heuristic rule '" + r + "'");
                }
                stages.push_back(MatcherStage::heuristic(std::move(rules)));
                i = close + 1;
                if (i < s.size()) {
                    if (s[i] != ',') throw fail("expected ',' after ')'");
                    ++i;
                }
            } else {
                stages.push_back(MatcherStage::heuristic());
                i = end == std::string::npos ? s.size() : end + 1;
            }
        } else {
            throw fail("unknown stage '" + name + "'");
        }
    }
    try {
        validate_stages(stages);
    } catch (const InputError& e) {
        throw fail(e.what());
    }
    return stages;
}

inline std::string format_stages(const StageList& stages) {
    std::string out;
    for (const auto& st : stages) {
        if (!out.empty()) out += ',';
        out += to_string(st.kind);
        if (st.kind == StageKind::heuristic) {
            out += '(';
            for (std::size_t i = 0; i < st.rules.size(); ++i) {
                if (i) out += ',';
                out += to_string(st.rules[i]);
            }
            out += ')';
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

/// Half-open range of content-token indices.
struct Span {
    std::size_t begin = 0;
    std::size_t length = 1;

    std::size_t end() const noexcept { return begin + length; }
    friend bool operator==(const Span&, const Span&) = default;
};

struct MatchPair {
    Span student;
    Span reference;
    StageKind stage = StageKind::exact;
    std::optional<HeuristicRule> rule;

    friend bool operator==(const MatchPair&, const MatchPair&) = default;
};

struct Alignment {
    std::vector<MatchPair> pairs;  // ordered by student position
    std::size_t student_len = 0;
    std::size_t reference_len = 0;
    std::size_t chunk_count = 0;

    std::size_t matched_student_count() const {
        std::size_t n = 0;
        for (const auto& p : pairs) n += p.student.length;
        return n;
    }
    std::size_t matched_reference_count() const {
        std::size_t n = 0;
        for (const auto& p : pairs) n += p.reference.length;
        return n;
    }

    std::vector<bool> student_coverage() const { return coverage(true); }
    std::vector<bool> reference_coverage() const { return coverage(false); }

    friend bool operator==(const Alignment&, const Alignment&) = default;

private:
    std::vector<bool> coverage(bool student_side) const {
        std::vector<bool> out(student_side ? student_len : reference_len, false);
        for (const auto& p : pairs) {
            const auto& span = student_side ? p.student : p.reference;
            for (auto i = span.begin; i < span.end(); ++i) out[i] = true;
        }
        return out;
    }
};

/// Maximal runs of pairs that are adjacent and in the same order on both
/// sides. `pairs` must be sorted by student position.
inline std::size_t count_chunks(std::span<const MatchPair> pairs) {
    if (pairs.empty()) return 0;
    std::size_t chunks = 1;
    for (std::size_t i = 1; i < pairs.size(); ++i) {
        const auto& prev = pairs[i - 1];
        const auto& cur = pairs[i];
        if (cur.student.begin != prev.student.end() || cur.reference.begin != prev.reference.end()) ++chunks;
    }
    return chunks;
}

namespace detail {

inline bool all_free(const std::vector<bool>& used, std::size_t begin, std::size_t len) {
    if (begin + len > used.size()) return false;
    for (auto i = begin; i < begin + len; ++i)
        if (used[i]) return false;
    return true;
}

inline void mark(std::vector<bool>& used, Span s) {
    for (auto i = s.begin; i < s.end(); ++i) used[i] = true;
}

inline bool words(const Token& a, const Token& b) {
    return a.kind == TokenKind::word && b.kind == TokenKind::word;
}

inline bool rule_matches(HeuristicRule rule, const Token& a, const Token& b, const Resources& res) {
    switch (rule) {
        case HeuristicRule::synonym:
            return words(a, b) && share_synset_inflected(a.normalized, b.normalized, res.synonyms);
        case HeuristicRule::numeric: {
            auto va = numeric_value(a);
            auto vb = numeric_value(b);
            return va && vb && *va == *vb;
        }
        case HeuristicRule::derivational: {
            if (!words(a, b)) return false;
            auto ra = derivational_root(a.normalized, res.derivations);
            auto rb = derivational_root(b.normalized, res.derivations);
            return ra == rb || share_synset(ra, rb, res.synonyms);
        }
        case HeuristicRule::gazetteer:
            return words(a, b) && gazetteer_related(a.normalized, b.normalized, res.gazetteer);
        case HeuristicRule::acronym:
            return false;  // spans, handled separately
    }
    return false;
}

// Greedy left-to-right over the student; each student token takes the
// leftmost free compatible reference token.
template <typename Compatible>
void greedy_unigram_pass(const std::vector<Token>& student, const std::vector<Token>& reference,
                         std::vector<bool>& s_used, std::vector<bool>& r_used, StageKind kind,
                         std::optional<HeuristicRule> rule, Compatible&& compatible, std::vector<MatchPair>& out) {
    for (std::size_t i = 0; i < student.size(); ++i) {
        if (s_used[i]) continue;
        for (std::size_t j = 0; j < reference.size(); ++j) {
            if (r_used[j] || !compatible(student[i], reference[j])) continue;
            MatchPair p{{i, 1}, {j, 1}, kind, rule};
            s_used[i] = r_used[j] = true;
            out.push_back(p);
            break;
        }
    }
}

// An acronym on one side against a window of as many consecutive free words
// on the other side.
inline void acronym_pass(const std::vector<Token>& student, const std::vector<Token>& reference,
                         std::vector<bool>& s_used, std::vector<bool>& r_used, std::vector<MatchPair>& out) {
    const std::span<const Token> s_tokens(student);
    const std::span<const Token> r_tokens(reference);
    for (std::size_t i = 0; i < student.size(); ++i) {
        if (s_used[i]) continue;
        const auto& tok = student[i];
        if (is_acronym(tok.surface)) {
            const auto len = tok.surface.size();
            for (std::size_t j = 0; j + len <= reference.size(); ++j) {
                if (all_free(r_used, j, len) && acronym_matches(tok.surface, r_tokens.subspan(j, len))) {
                    MatchPair p{{i, 1}, {j, len}, StageKind::heuristic, HeuristicRule::acronym};
                    mark(s_used, p.student);
                    mark(r_used, p.reference);
                    out.push_back(p);
                    break;
                }
            }
            continue;
        }
        for (std::size_t j = 0; j < reference.size(); ++j) {
            const auto& ref = reference[j];
            if (r_used[j] || !is_acronym(ref.surface)) continue;
            const auto len = ref.surface.size();
            if (all_free(s_used, i, len) && acronym_matches(ref.surface, s_tokens.subspan(i, len))) {
                MatchPair p{{i, len}, {j, 1}, StageKind::heuristic, HeuristicRule::acronym};
                mark(s_used, p.student);
                mark(r_used, p.reference);
                out.push_back(p);
                break;
            }
        }
    }
}

}  // namespace detail

/// New pairs from one stage, restricted to positions `existing` leaves
/// unmatched. A heuristic stage runs one full pass per rule, in rule order.
inline std::vector<MatchPair> run_stage(const MatcherStage& stage, const ProcessedText& student,
                                        const ProcessedText& reference, const Alignment& existing,
                                        const Resources& resources) {
    const auto& s = student.content_tokens;
    const auto& r = reference.content_tokens;
    auto s_used = existing.student_coverage();
    auto r_used = existing.reference_coverage();
    s_used.resize(s.size(), false);
    r_used.resize(r.size(), false);
    std::vector<MatchPair> out;
    switch (stage.kind) {
        case StageKind::exact:
            detail::greedy_unigram_pass(s, r, s_used, r_used, StageKind::exact, std::nullopt,
                                        [](const Token& a, const Token& b) { return a.normalized == b.normalized; },
                                        out);
            break;
        case StageKind::stem:
            detail::greedy_unigram_pass(s, r, s_used, r_used, StageKind::stem, std::nullopt,
                                        [](const Token& a, const Token& b) { return a.stem == b.stem; }, out);
            break;
        case StageKind::heuristic:
            for (auto rule : stage.rules) {
                if (rule == HeuristicRule::acronym) {
                    detail::acronym_pass(s, r, s_used, r_used, out);
                } else {
                    detail::greedy_unigram_pass(
                        s, r, s_used, r_used, StageKind::heuristic, rule,
                        [&](const Token& a, const Token& b) { return detail::rule_matches(rule, a, b, resources); },
                        out);
                }
            }
            break;
    }
    return out;
}

inline Alignment align(const ProcessedText& student, const ProcessedText& reference, const StageList& stages,
                       const Resources& resources) {
    validate_stages(stages);
    Alignment a;
    a.student_len = student.content_tokens.size();
    a.reference_len = reference.content_tokens.size();
    for (const auto& stage : stages) {
        auto added = run_stage(stage, student, reference, a, resources);
        a.pairs.insert(a.pairs.end(), added.begin(), added.end());
    }
    std::sort(a.pairs.begin(), a.pairs.end(),
              [](const MatchPair& x, const MatchPair& y) { return x.student.begin < y.student.begin; });
    a.chunk_count = count_chunks(a.pairs);
    return a;
}

}  // namespace asags
