#pragma once

// Lexical resources behind the heuristic matching rules: synonym sets,
// number words, derivational roots, place names and demonyms.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "asags/csv.hpp"
#include "asags/error.hpp"
#include "asags/text.hpp"

namespace asags {

enum class PartOfSpeech { noun, verb, adj, adv };

inline std::optional<PartOfSpeech> parse_pos(std::string_view s) {
    auto l = detail::to_lower(s);
    if (l == "n" || l == "noun") return PartOfSpeech::noun;
    if (l == "v" || l == "verb") return PartOfSpeech::verb;
    if (l == "a" || l == "s" || l == "adj") return PartOfSpeech::adj;
    if (l == "r" || l == "adv") return PartOfSpeech::adv;
    return std::nullopt;
}

inline std::string_view pos_code(PartOfSpeech p) {
    switch (p) {
        case PartOfSpeech::noun: return "n";
        case PartOfSpeech::verb: return "v";
        case PartOfSpeech::adj: return "a";
        case PartOfSpeech::adv: return "r";
    }
    return "n";
}

struct Synset {
    std::string id;
    PartOfSpeech pos = PartOfSpeech::noun;
    std::vector<std::string> lemmas;
};

// ---------------------------------------------------------------------------
// Synonyms

class SynonymLexicon {
public:
    /// Adds a synset; lemmas are case-folded and de-duplicated. Throws
    /// InputError on a duplicate id or an empty member list.
    void add(Synset synset) {
        if (by_id_.count(synset.id)) throw InputError("duplicate synset id '" + synset.id + "'");
        std::vector<std::string> members;
        for (auto& l : synset.lemmas) {
            auto folded = detail::to_lower(detail::trim(l));
            if (!folded.empty() && std::find(members.begin(), members.end(), folded) == members.end())
                members.push_back(std::move(folded));
        }
        if (members.empty()) throw InputError("synset '" + synset.id + "' has no members");
        synset.lemmas = std::move(members);
        for (const auto& l : synset.lemmas) index_[l].insert(synset.id);
        by_id_.emplace(synset.id, std::move(synset));
    }

    std::size_t size() const noexcept { return by_id_.size(); }

    const Synset* find(std::string_view id) const {
        auto it = by_id_.find(std::string(id));
        return it == by_id_.end() ? nullptr : &it->second;
    }

    /// Ids of the synsets containing `lemma`, in ascending order.
    const std::set<std::string>& synsets_of(std::string_view lemma) const {
        static const std::set<std::string> none;
        auto it = index_.find(std::string(lemma));
        return it == index_.end() ? none : it->second;
    }

    /// Part of speech of the first (lowest id) synset holding both lemmas.
    std::optional<PartOfSpeech> shared_synset_pos(std::string_view a, std::string_view b) const {
        const auto& sa = synsets_of(a);
        const auto& sb = synsets_of(b);
        for (const auto& id : sa)
            if (sb.count(id)) return by_id_.at(id).pos;
        return std::nullopt;
    }

    /// All synsets in id order.
    std::vector<const Synset*> synsets() const {
        std::vector<const Synset*> out;
        out.reserve(by_id_.size());
        for (const auto& [id, s] : by_id_) out.push_back(&s);
        return out;
    }

private:
    std::map<std::string, Synset> by_id_;
    std::map<std::string, std::set<std::string>> index_;
};

inline bool share_synset(std::string_view a, std::string_view b, const SynonymLexicon& lex) {
    return lex.shared_synset_pos(a, b).has_value();
}

/// The word itself plus the base forms WordNet's detachment rules give
/// (noun plurals, verb -s/-ed/-ing, adjective -er/-est). Candidates are not
/// checked against any lexicon.
inline std::vector<std::string> lemma_candidates(std::string_view word) {
    static constexpr std::pair<std::string_view, std::string_view> kRules[] = {
        {"s", ""},    {"ses", "s"}, {"xes", "x"}, {"zes", "z"}, {"ches", "ch"}, {"shes", "sh"},
        {"men", "man"}, {"ies", "y"}, {"es", "e"}, {"es", ""},  {"ed", "e"},   {"ed", ""},
        {"ing", "e"}, {"ing", ""},  {"er", ""},   {"est", ""},  {"er", "e"},   {"est", "e"},
    };
    std::vector<std::string> out{std::string(word)};
    for (const auto& [suffix, replacement] : kRules) {
        if (word.size() <= suffix.size() + 1 || !word.ends_with(suffix)) continue;
        std::string base(word.substr(0, word.size() - suffix.size()));
        base += replacement;
        if (std::find(out.begin(), out.end(), base) == out.end()) out.push_back(std::move(base));
    }
    return out;
}

/// share_synset over every pair of lemma candidates of `a` and `b`.
inline bool share_synset_inflected(std::string_view a, std::string_view b, const SynonymLexicon& lex) {
    if (share_synset(a, b, lex)) return true;
    const auto ca = lemma_candidates(a);
    const auto cb = lemma_candidates(b);
    for (const auto& x : ca) {
        if (lex.synsets_of(x).empty()) continue;
        for (const auto& y : cb)
            if (share_synset(x, y, lex)) return true;
    }
    return false;
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        out.emplace_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

// Tab-separated when the line has a tab, otherwise whitespace-separated.
inline std::vector<std::string> split_fields(std::string_view line) {
    if (line.find('\t') != std::string_view::npos) return split(line, '\t');
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string f;
    while (in >> f) out.push_back(f);
    return out;
}

inline bool is_blank_or_comment(std::string_view line) {
    auto t = trim(line);
    return t.empty() || t.front() == '#';
}

inline std::ifstream open_resource(const std::string& path, std::string_view what) {
    std::ifstream in(path);
    if (!in) throw ResourceError("cannot open " + std::string(what) + ": " + path);
    return in;
}

}  // namespace detail

/// Parses the flat synonym format: `pos<TAB>synset_id<TAB>lemma1,lemma2,...`.
inline SynonymLexicon parse_synonyms(std::istream& in, const std::string& source = "<synonyms>") {
    SynonymLexicon lex;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 3) throw LoadError(source, lineno, "expected 3 fields: pos, synset id, lemmas");
        auto pos = parse_pos(fields[0]);
        if (!pos) throw LoadError(source, lineno, "unknown part of speech '" + fields[0] + "'");
        if (fields[1].empty()) throw LoadError(source, lineno, "empty synset id");
        Synset s{fields[1], *pos, detail::split(fields[2], ',')};
        try {
            lex.add(std::move(s));
        } catch (const InputError& e) {
            throw LoadError(source, lineno, e.what());
        }
    }
    return lex;
}

inline SynonymLexicon load_synonyms(const std::string& path) {
    auto in = detail::open_resource(path, "synonym file");
    return parse_synonyms(in, path);
}

inline void write_synonyms(std::ostream& out, const SynonymLexicon& lex) {
    for (const auto* s : lex.synsets()) {
        out << pos_code(s->pos) << '\t' << s->id << '\t';
        for (std::size_t i = 0; i < s->lemmas.size(); ++i) out << (i ? "," : "") << s->lemmas[i];
        out << '\n';
    }
}

/// Reads synsets from a WordNet `data.<pos>` file. Licence header lines
/// (leading spaces) are skipped; each synset id is `<pos code><offset>`.
/// Multiword lemmas keep WordNet's underscores.
inline std::vector<Synset> import_wordnet_data(std::istream& in, const std::string& source = "<wordnet>") {
    std::vector<Synset> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == ' ') continue;
        std::istringstream fields(line);
        std::string offset, lex_filenum, ss_type, w_cnt_hex;
        if (!(fields >> offset >> lex_filenum >> ss_type >> w_cnt_hex))
            throw LoadError(source, lineno, "truncated synset record");
        auto pos = parse_pos(ss_type);
        if (!pos) throw LoadError(source, lineno, "unknown synset type '" + ss_type + "'");
        unsigned count = 0;
        auto [ptr, ec] = std::from_chars(w_cnt_hex.data(), w_cnt_hex.data() + w_cnt_hex.size(), count, 16);
        if (ec != std::errc{} || ptr != w_cnt_hex.data() + w_cnt_hex.size() || count == 0)
            throw LoadError(source, lineno, "bad word count '" + w_cnt_hex + "'");
        Synset s;
        s.id = std::string(pos_code(*pos)) + offset;
        s.pos = *pos;
        for (unsigned i = 0; i < count; ++i) {
            std::string word, lex_id;
            if (!(fields >> word >> lex_id)) throw LoadError(source, lineno, "truncated word list");
            // adjective markers such as "(p)" are attached to the lemma
            if (auto paren = word.find('('); paren != std::string::npos) word.erase(paren);
            s.lemmas.push_back(detail::to_lower(word));
        }
        out.push_back(std::move(s));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Numbers

namespace detail {

struct NumberWord {
    std::string_view word;
    std::int64_t value;
    bool ordinal;
};

inline constexpr NumberWord kNumberWords[] = {
    {"zero", 0, false}, {"one", 1, false}, {"two", 2, false}, {"three", 3, false},
    {"four", 4, false}, {"five", 5, false}, {"six", 6, false}, {"seven", 7, false},
    {"eight", 8, false}, {"nine", 9, false}, {"ten", 10, false}, {"eleven", 11, false},
    {"twelve", 12, false}, {"thirteen", 13, false}, {"fourteen", 14, false}, {"fifteen", 15, false},
    {"sixteen", 16, false}, {"seventeen", 17, false}, {"eighteen", 18, false}, {"nineteen", 19, false},
    {"twenty", 20, false}, {"thirty", 30, false}, {"forty", 40, false}, {"fifty", 50, false},
    {"sixty", 60, false}, {"seventy", 70, false}, {"eighty", 80, false}, {"ninety", 90, false},
    {"hundred", 100, false}, {"thousand", 1'000, false}, {"million", 1'000'000, false},
    {"billion", 1'000'000'000, false}, {"trillion", 1'000'000'000'000, false},
    {"zeroth", 0, true}, {"first", 1, true}, {"second", 2, true}, {"third", 3, true},
    {"fourth", 4, true}, {"fifth", 5, true}, {"sixth", 6, true}, {"seventh", 7, true},
    {"eighth", 8, true}, {"ninth", 9, true}, {"tenth", 10, true}, {"eleventh", 11, true},
    {"twelfth", 12, true}, {"thirteenth", 13, true}, {"fourteenth", 14, true}, {"fifteenth", 15, true},
    {"sixteenth", 16, true}, {"seventeenth", 17, true}, {"eighteenth", 18, true}, {"nineteenth", 19, true},
    {"twentieth", 20, true}, {"thirtieth", 30, true}, {"fortieth", 40, true}, {"fiftieth", 50, true},
    {"sixtieth", 60, true}, {"seventieth", 70, true}, {"eightieth", 80, true}, {"ninetieth", 90, true},
    {"hundredth", 100, true}, {"thousandth", 1'000, true}, {"millionth", 1'000'000, true},
    {"billionth", 1'000'000'000, true}, {"trillionth", 1'000'000'000'000, true},
};

inline const NumberWord* find_number_word(std::string_view w) {
    for (const auto& nw : kNumberWords)
        if (nw.word == w) return &nw;
    return nullptr;
}

inline std::optional<std::int64_t> parse_digits(std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

// Hyphen-joined number words ("twenty-one", "two-hundred-fifth"); only the
// last part may be ordinal.
inline std::optional<std::int64_t> parse_number_words(std::string_view w) {
    auto parts = split(w, '-');
    std::int64_t total = 0;
    std::int64_t current = 0;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto* nw = find_number_word(parts[i]);
        if (!nw) return std::nullopt;
        if (nw->ordinal && i + 1 != parts.size()) return std::nullopt;
        if (nw->value == 100) {
            current = (current == 0 ? 1 : current) * 100;
        } else if (nw->value >= 1000) {
            total += (current == 0 ? 1 : current) * nw->value;
            current = 0;
        } else {
            current += nw->value;
        }
    }
    return total + current;
}

}  // namespace detail

/// Value of a digit string (optionally with an ordinal suffix) or of a
/// cardinal/ordinal number word. Absent for anything else or on overflow.
inline std::optional<std::int64_t> numeric_value(std::string_view normalized) {
    if (normalized.empty()) return std::nullopt;
    if (detail::is_digit(normalized.front())) {
        auto digits_end = normalized.find_first_not_of("0123456789");
        if (digits_end == std::string_view::npos) return detail::parse_digits(normalized);
        if (normalized.size() - digits_end == 2 && detail::is_ordinal_suffix(normalized.substr(digits_end)))
            return detail::parse_digits(normalized.substr(0, digits_end));
        return std::nullopt;
    }
    return detail::parse_number_words(detail::to_lower(normalized));
}

inline std::optional<std::int64_t> numeric_value(const Token& token) {
    if (token.kind == TokenKind::punctuation) return std::nullopt;
    return numeric_value(std::string_view(token.normalized));
}

// ---------------------------------------------------------------------------
// Acronyms

/// At least two letters, all upper-case ASCII.
inline bool is_acronym(std::string_view surface) {
    if (surface.size() < 2) return false;
    return std::all_of(surface.begin(), surface.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

/// True when `acronym_surface` is all capitals, has one letter per window
/// word, and each letter is the first character of its word.
inline bool acronym_matches(std::string_view acronym_surface, std::span<const Token> window) {
    if (window.size() < 2 || !is_acronym(acronym_surface) || acronym_surface.size() != window.size())
        return false;
    for (std::size_t i = 0; i < window.size(); ++i) {
        const auto& w = window[i];
        if (w.kind != TokenKind::word || w.normalized.empty()) return false;
        if (w.normalized[0] != static_cast<char>(acronym_surface[i] - 'A' + 'a')) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Derivations

class DerivationTable {
public:
    void add(std::string_view lemma, std::string_view root) {
        auto l = detail::to_lower(detail::trim(lemma));
        auto r = detail::to_lower(detail::trim(root));
        if (l.empty() || r.empty()) throw InputError("empty lemma or root");
        auto [it, inserted] = roots_.emplace(l, r);
        if (!inserted && it->second != r) throw InputError("conflicting roots for '" + l + "'");
    }

    /// Rejects chains (a root that itself maps elsewhere), so every lookup
    /// is one step and idempotent.
    void validate() const {
        for (const auto& [lemma, root] : roots_) {
            auto it = roots_.find(root);
            if (it != roots_.end() && it->second != root)
                throw InputError("root '" + root + "' of '" + lemma + "' maps to '" + it->second + "'");
        }
    }

    const std::string* find(std::string_view lemma) const {
        auto it = roots_.find(std::string(lemma));
        return it == roots_.end() ? nullptr : &it->second;
    }

    std::size_t size() const noexcept { return roots_.size(); }
    const std::map<std::string, std::string>& entries() const noexcept { return roots_; }

private:
    std::map<std::string, std::string> roots_;
};

inline DerivationTable parse_derivations(std::istream& in, const std::string& source = "<derivations>") {
    DerivationTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::is_blank_or_comment(line)) continue;
        auto fields = detail::split_fields(line);
        if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
            throw LoadError(source, lineno, "expected 2 fields: lemma, root");
        try {
            table.add(fields[0], fields[1]);
        } catch (const InputError& e) {
            throw LoadError(source, lineno, e.what());
        }
    }
    try {
        table.validate();
    } catch (const InputError& e) {
        throw LoadError(source, 0, e.what());
    }
    return table;
}

inline DerivationTable load_derivations(const std::string& path) {
    auto in = detail::open_resource(path, "derivation file");
    return parse_derivations(in, path);
}

inline std::string derivational_root(std::string_view lemma, const DerivationTable& table) {
    if (const auto* root = table.find(lemma)) return *root;
    return std::string(lemma);
}

// ---------------------------------------------------------------------------
// Gazetteer

struct GazetteerEntry {
    std::string canonical;
    std::vector<std::string> alternates;
    std::vector<std::string> adjectivals;
    std::vector<std::string> demonyms;

    std::vector<std::string> forms() const {
        std::vector<std::string> out{canonical};
        for (const auto* list : {&alternates, &adjectivals, &demonyms}) out.insert(out.end(), list->begin(), list->end());
        return out;
    }
};

class Gazetteer {
public:
    /// Throws InputError when a form repeats inside the entry.
    void add(GazetteerEntry entry) {
        auto fold = [](std::vector<std::string>& list) {
            std::vector<std::string> kept;
            for (auto& s : list)
                if (auto f = detail::to_lower(detail::trim(s)); !f.empty()) kept.push_back(std::move(f));
            list = std::move(kept);
        };
        entry.canonical = detail::to_lower(detail::trim(entry.canonical));
        if (entry.canonical.empty()) throw InputError("empty canonical place name");
        fold(entry.alternates);
        fold(entry.adjectivals);
        fold(entry.demonyms);
        auto forms = entry.forms();
        std::set<std::string> seen;
        for (const auto& f : forms)
            if (!seen.insert(f).second) throw InputError("form '" + f + "' repeated in entry '" + entry.canonical + "'");
        const auto idx = entries_.size();
        for (const auto& f : forms) index_[f].insert(idx);
        entries_.push_back(std::move(entry));
    }

    bool related(std::string_view a, std::string_view b) const {
        auto ia = index_.find(std::string(a));
        auto ib = index_.find(std::string(b));
        if (ia == index_.end() || ib == index_.end()) return false;
        for (auto e : ia->second)
            if (ib->second.count(e)) return true;
        return false;
    }

    std::size_t size() const noexcept { return entries_.size(); }
    const std::vector<GazetteerEntry>& entries() const noexcept { return entries_; }

private:
    std::vector<GazetteerEntry> entries_;
    std::map<std::string, std::set<std::size_t>> index_;
};

inline bool gazetteer_related(std::string_view a, std::string_view b, const Gazetteer& gaz) {
    return gaz.related(a, b);
}

/// CSV columns: canonical, alternates, adjectivals, demonyms; list columns
/// are `;`-separated. A first row starting with `canonical` is a header;
/// rows whose first field starts with `#` are comments.
inline Gazetteer parse_gazetteer(std::istream& in, const std::string& source = "<gazetteer>") {
    Gazetteer gaz;
    auto records = csv::read(in, source);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto& rec = records[r];
        auto first = detail::to_lower(detail::trim(rec.fields[0]));
        if (!first.empty() && first[0] == '#') continue;
        if (r == 0 && first == "canonical") continue;
        if (rec.fields.size() != 4) throw LoadError(source, rec.line, "expected 4 columns");
        auto list = [](const std::string& f) {
            std::vector<std::string> out;
            if (detail::trim(f).empty()) return out;
            for (auto& s : detail::split(f, ';'))
                if (!s.empty()) out.push_back(std::move(s));
            return out;
        };
        try {
            gaz.add({rec.fields[0], list(rec.fields[1]), list(rec.fields[2]), list(rec.fields[3])});
        } catch (const InputError& e) {
            throw LoadError(source, rec.line, e.what());
        }
    }
    return gaz;
}

inline Gazetteer load_gazetteer(const std::string& path) {
    auto in = detail::open_resource(path, "gazetteer");
    return parse_gazetteer(in, path);
}

// ---------------------------------------------------------------------------

/// Every lexical resource the heuristic rules consult. Immutable once loaded.
struct Resources {
    SynonymLexicon synonyms;
    DerivationTable derivations;
    Gazetteer gazetteer;
};

struct ResourcePaths {
    std::string synonyms;
    std::string derivations;
    std::string gazetteer;

    /// Default file names inside a resource directory.
    static ResourcePaths in_directory(const std::filesystem::path& dir) {
        return {(dir / "synonyms.tsv").string(), (dir / "derivations.tsv").string(), (dir / "gazetteer.csv").string()};
    }
};

inline Resources load_resources(const ResourcePaths& paths) {
    Resources r;
    if (!paths.synonyms.empty()) r.synonyms = load_synonyms(paths.synonyms);
    if (!paths.derivations.empty()) r.derivations = load_derivations(paths.derivations);
    if (!paths.gazetteer.empty()) r.gazetteer = load_gazetteer(paths.gazetteer);
    return r;
}

}  // namespace asags
