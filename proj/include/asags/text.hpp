#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asags/error.hpp"
#include "asags/porter.hpp"

namespace asags {

enum class TokenKind { word, number, punctuation };

struct Token {
    std::string surface;
    std::string normalized;  // case-folded surface
    std::string stem;        // Porter stem for words, normalized otherwise
    std::size_t position = 0;
    std::size_t sentence_index = 0;
    TokenKind kind = TokenKind::word;
    bool is_stopword = false;

    friend bool operator==(const Token&, const Token&) = default;
};

class StopList {
public:
    StopList() = default;
    StopList(std::initializer_list<std::string_view> words) {
        for (auto w : words) add(w);
    }

    void add(std::string_view word);
    bool contains(std::string_view normalized) const { return words_.count(std::string(normalized)) != 0; }
    std::size_t size() const noexcept { return words_.size(); }
    const std::set<std::string>& words() const noexcept { return words_; }

private:
    std::set<std::string> words_;
};

/// Loads a stop list: one word per line, `#` starts a comment, blank lines
/// ignored. Entries are case-folded.
StopList load_stoplist(const std::string& path);

struct ProcessedText {
    std::string raw;
    std::vector<Token> all_tokens;
    std::vector<Token> content_tokens;
    std::size_t sentence_count = 0;

    friend bool operator==(const ProcessedText&, const ProcessedText&) = default;
};

std::vector<Token> tokenize(std::string_view raw);
std::size_t split_sentences(std::vector<Token>& tokens);
ProcessedText preprocess(std::string_view raw, const StopList& stoplist);

// ---------------------------------------------------------------------------

namespace detail {

// Bytes >= 0x80 are treated as letters so UTF-8 words stay in one token.
inline bool is_letter(char c) {
    auto u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || u >= 0x80;
}

inline bool is_digit(char c) { return c >= '0' && c <= '9'; }

inline bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

inline std::string to_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

inline bool is_ordinal_suffix(std::string_view s) {
    auto l = to_lower(s);
    return l == "st" || l == "nd" || l == "rd" || l == "th";
}

inline bool starts_capitalized(const Token& t) {
    return t.kind == TokenKind::word && t.surface[0] >= 'A' && t.surface[0] <= 'Z';
}

inline bool is_sentence_final(const Token& t) {
    return t.kind == TokenKind::punctuation && (t.surface == "." || t.surface == "!" || t.surface == "?");
}

}  // namespace detail

inline void StopList::add(std::string_view word) {
    auto w = detail::to_lower(detail::trim(word));
    if (!w.empty()) words_.insert(std::move(w));
}

inline StopList load_stoplist(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open stop list: " + path);
    StopList list;
    std::string line;
    while (std::getline(in, line)) {
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        list.add(view);
    }
    return list;
}

/// Splits text into word, number and punctuation tokens. Words are maximal
/// letter runs with internal apostrophes or hyphens; numbers are digit runs
/// with an optional ordinal suffix (st/nd/rd/th); any other non-space
/// character is a punctuation token of its own.
inline std::vector<Token> tokenize(std::string_view raw) {
    using namespace detail;
    std::vector<Token> tokens;
    const std::size_t n = raw.size();
    std::size_t i = 0;
    auto emit = [&](std::size_t begin, std::size_t end, TokenKind kind) {
        Token t;
        t.surface = std::string(raw.substr(begin, end - begin));
        t.normalized = to_lower(t.surface);
        t.stem = kind == TokenKind::word ? porter_stem(t.normalized) : t.normalized;
        t.kind = kind;
        t.position = tokens.size();
        tokens.push_back(std::move(t));
    };
    while (i < n) {
        char c = raw[i];
        if (is_space(c)) {
            ++i;
        } else if (is_letter(c)) {
            std::size_t j = i + 1;
            while (j < n) {
                if (is_letter(raw[j])) {
                    ++j;
                } else if ((raw[j] == '\'' || raw[j] == '-') && j + 1 < n && is_letter(raw[j + 1])) {
                    j += 2;
                } else {
                    break;
                }
            }
            emit(i, j, TokenKind::word);
            i = j;
        } else if (is_digit(c)) {
            std::size_t j = i + 1;
            while (j < n && is_digit(raw[j])) ++j;
            if (j + 2 <= n && is_ordinal_suffix(raw.substr(j, 2)) && (j + 2 == n || !is_letter(raw[j + 2])))
                j += 2;
            emit(i, j, TokenKind::number);
            i = j;
        } else {
            emit(i, i + 1, TokenKind::punctuation);
            ++i;
        }
    }
    return tokens;
}

/// Assigns sentence indices. A boundary follows `.`, `!` or `?` when the next
/// token is a capitalized word or the input ends there. Returns the sentence
/// count.
inline std::size_t split_sentences(std::vector<Token>& tokens) {
    std::size_t sentence = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        tokens[i].sentence_index = sentence;
        if (detail::is_sentence_final(tokens[i]) && i + 1 < tokens.size() &&
            detail::starts_capitalized(tokens[i + 1]))
            ++sentence;
    }
    return tokens.empty() ? 0 : sentence + 1;
}

inline ProcessedText preprocess(std::string_view raw, const StopList& stoplist) {
    ProcessedText out;
    out.raw = std::string(raw);
    out.all_tokens = tokenize(raw);
    out.sentence_count = split_sentences(out.all_tokens);
    for (auto& t : out.all_tokens) {
        t.is_stopword = t.kind != TokenKind::punctuation && stoplist.contains(t.normalized);
        if (!t.is_stopword && t.kind != TokenKind::punctuation) out.content_tokens.push_back(t);
    }
    return out;
}

}  // namespace asags
