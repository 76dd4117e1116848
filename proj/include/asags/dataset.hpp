#pragma once

// Datasets: a question, weighted reference answers and human-scored student
// answers. JSON interchange format plus a CSV importer for the public
// short-answer benchmark layout.

#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "asags/config.hpp"
#include "asags/csv.hpp"
#include "asags/error.hpp"
#include "asags/scoring.hpp"

namespace asags {

struct ReferenceAnswer {
    std::string id;
    std::string text;
    double weight = 1.0;
};

struct StudentAnswer {
    std::string id;
    std::string text;
    double human_score = 0;
};

struct Dataset {
    std::string dataset_id;
    std::string question;
    GradeScale scale;
    std::vector<ReferenceAnswer> references;
    std::vector<StudentAnswer> answers;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const char* key, const std::string& path, const std::string& source) {
    if (!obj.is_object()) throw LoadError(source, 0, path + ": expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw LoadError(source, 0, path + "." + key + ": missing");
    return *it;
}

inline std::string require_string(const json& obj, const char* key, const std::string& path, const std::string& source) {
    const auto& v = require(obj, key, path, source);
    if (!v.is_string()) throw LoadError(source, 0, path + "." + key + ": expected a string");
    return v.get<std::string>();
}

inline double require_number(const json& v, const std::string& where, const std::string& source) {
    if (!v.is_number()) throw LoadError(source, 0, where + ": expected a number");
    return v.get<double>();
}

}  // namespace detail

/// Validates and converts a parsed JSON document. `answers` may be omitted
/// when `require_answers` is false (a question file for grading).
inline Dataset dataset_from_json(const nlohmann::json& doc, const std::string& source, bool require_answers = true) {
    using detail::json;
    Dataset d;
    const std::string root = "$";
    if (!doc.is_object()) throw LoadError(source, 0, root + ": expected an object");
    if (auto it = doc.find("dataset_id"); it != doc.end()) {
        if (!it->is_string()) throw LoadError(source, 0, "$.dataset_id: expected a string");
        d.dataset_id = it->get<std::string>();
    } else {
        d.dataset_id = std::filesystem::path(source).stem().string();
    }
    if (auto it = doc.find("question"); it != doc.end()) {
        if (!it->is_string()) throw LoadError(source, 0, "$.question: expected a string");
        d.question = it->get<std::string>();
    }
    if (auto it = doc.find("scale"); it != doc.end()) {
        d.scale.min_grade = detail::require_number(detail::require(*it, "min", "$.scale", source), "$.scale.min", source);
        d.scale.max_grade = detail::require_number(detail::require(*it, "max", "$.scale", source), "$.scale.max", source);
        try {
            d.scale.validate();
        } catch (const InputError& e) {
            throw LoadError(source, 0, std::string("$.scale: ") + e.what());
        }
    }

    const auto& refs = detail::require(doc, "references", root, source);
    if (!refs.is_array() || refs.empty()) throw LoadError(source, 0, "$.references: expected a non-empty array");
    std::set<std::string> ref_ids;
    for (std::size_t i = 0; i < refs.size(); ++i) {
        const std::string path = "$.references[" + std::to_string(i) + "]";
        ReferenceAnswer r;
        r.id = detail::require_string(refs[i], "id", path, source);
        r.text = detail::require_string(refs[i], "text", path, source);
        if (auto it = refs[i].find("weight"); it != refs[i].end()) {
            r.weight = detail::require_number(*it, path + ".weight", source);
            if (!(r.weight >= 0)) throw LoadError(source, 0, path + ".weight: must be >= 0");
        }
        if (!ref_ids.insert(r.id).second) throw LoadError(source, 0, path + ".id: duplicate '" + r.id + "'");
        d.references.push_back(std::move(r));
    }

    auto answers_it = doc.find("answers");
    if (answers_it == doc.end()) {
        if (require_answers) throw LoadError(source, 0, "$.answers: missing");
        return d;
    }
    if (!answers_it->is_array()) throw LoadError(source, 0, "$.answers: expected an array");
    std::set<std::string> answer_ids;
    for (std::size_t i = 0; i < answers_it->size(); ++i) {
        const auto& a = (*answers_it)[i];
        const std::string path = "$.answers[" + std::to_string(i) + "]";
        StudentAnswer s;
        s.id = detail::require_string(a, "id", path, source);
        s.text = detail::require_string(a, "text", path, source);
        s.human_score = detail::require_number(detail::require(a, "human_score", path, source), path + ".human_score", source);
        if (!d.scale.contains(s.human_score))
            throw LoadError(source, 0,
                            path + ".human_score: " + detail::format_double(s.human_score) + " outside scale [" +
                                detail::format_double(d.scale.min_grade) + ", " + detail::format_double(d.scale.max_grade) + "]");
        if (!answer_ids.insert(s.id).second) throw LoadError(source, 0, path + ".id: duplicate '" + s.id + "'");
        d.answers.push_back(std::move(s));
    }
    return d;
}

inline Dataset parse_dataset_json(std::string_view text, const std::string& source, bool require_answers = true) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw LoadError(source, 0, std::string("invalid JSON: ") + e.what());
    }
    return dataset_from_json(doc, source, require_answers);
}

inline nlohmann::json dataset_to_json(const Dataset& d) {
    nlohmann::json doc;
    doc["dataset_id"] = d.dataset_id;
    doc["question"] = d.question;
    doc["scale"] = {{"min", d.scale.min_grade}, {"max", d.scale.max_grade}};
    doc["references"] = nlohmann::json::array();
    for (const auto& r : d.references) doc["references"].push_back({{"id", r.id}, {"text", r.text}, {"weight", r.weight}});
    doc["answers"] = nlohmann::json::array();
    for (const auto& a : d.answers)
        doc["answers"].push_back({{"id", a.id}, {"text", a.text}, {"human_score", a.human_score}});
    return doc;
}

/// Imports the benchmark's flat CSV export, one row per student answer.
/// Header names are matched case-insensitively:
///
///   question id    `id` or `question_id`
///   question       `question`
///   reference      `desired_answer` or `reference`
///   student answer `student_answer` or `answer`
///   human score    `score_avg` or `score`
///
/// Rows are grouped into one dataset per question id, in order of first
/// appearance; answer ids are `<question id>.<row number within question>`.
/// Distinct reference texts within a question become separate references.
inline std::vector<Dataset> import_benchmark_csv(std::string_view text, const std::string& source,
                                                 const GradeScale& scale = {}) {
    auto records = csv::parse(text, source);
    if (records.empty()) throw LoadError(source, 0, "empty CSV file");
    const auto& header = records.front().fields;
    auto column = [&](std::initializer_list<std::string_view> names) -> std::size_t {
        for (std::size_t i = 0; i < header.size(); ++i)
            for (auto n : names)
                if (detail::to_lower(detail::trim(header[i])) == n) return i;
        std::string wanted;
        for (auto n : names) wanted += (wanted.empty() ? "" : " or ") + std::string(n);
        throw LoadError(source, 1, "missing column " + wanted);
    };
    const auto c_id = column({"id", "question_id"});
    const auto c_question = column({"question"});
    const auto c_reference = column({"desired_answer", "reference"});
    const auto c_answer = column({"student_answer", "answer"});
    const auto c_score = column({"score_avg", "score"});

    std::vector<Dataset> out;
    std::map<std::string, std::size_t> by_id;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        if (rec.fields.size() != header.size())
            throw LoadError(source, rec.line, "expected " + std::to_string(header.size()) + " fields, got " +
                                                  std::to_string(rec.fields.size()));
        const auto qid = std::string(detail::trim(rec.fields[c_id]));
        auto [it, fresh] = by_id.emplace(qid, out.size());
        if (fresh) {
            Dataset d;
            d.dataset_id = qid;
            d.question = rec.fields[c_question];
            d.scale = scale;
            out.push_back(std::move(d));
        }
        auto& d = out[it->second];
        const auto& ref_text = rec.fields[c_reference];
        bool known = false;
        for (const auto& ref : d.references) known = known || ref.text == ref_text;
        if (!known) d.references.push_back({"r" + std::to_string(d.references.size() + 1), ref_text, 1.0});
        double score = 0;
        try {
            score = detail::parse_double("score", detail::trim(rec.fields[c_score]));
        } catch (const InputError& e) {
            throw LoadError(source, rec.line, e.what());
        }
        if (!d.scale.contains(score)) throw LoadError(source, rec.line, "human score outside scale");
        d.answers.push_back({qid + "." + std::to_string(d.answers.size() + 1), rec.fields[c_answer], score});
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ResourceError("cannot open " + path);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline Dataset load_dataset(const std::string& path) {
    return parse_dataset_json(read_file(path), path);
}

/// A JSON dataset, or every question in a benchmark CSV (by extension).
inline std::vector<Dataset> load_datasets(const std::string& path) {
    if (detail::to_lower(std::filesystem::path(path).extension().string()) == ".csv")
        return import_benchmark_csv(read_file(path), path);
    return {load_dataset(path)};
}

}  // namespace asags
