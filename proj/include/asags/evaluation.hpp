#pragma once

// Meta-evaluation: Pearson correlation between machine and human scores,
// per dataset, and the experiment drivers built on it (n-gram sweep,
// component comparison, matcher-stage ablation, baseline comparison).

#include <array>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "asags/alignment.hpp"
#include "asags/baselines.hpp"
#include "asags/config.hpp"
#include "asags/csv.hpp"
#include "asags/dataset.hpp"
#include "asags/lexicon.hpp"
#include "asags/scoring.hpp"
#include "asags/text.hpp"

namespace asags {

/// Sample Pearson correlation; absent when the lengths differ, fewer than two
/// points are given, or either vector has zero variance.
inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) return std::nullopt;
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

enum class Method { asags, erb, keywords, vsm };

inline constexpr std::array<Method, 4> kAllMethods = {Method::asags, Method::erb, Method::keywords, Method::vsm};

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::asags: return "asags";
        case Method::erb: return "erb";
        case Method::keywords: return "keywords";
        case Method::vsm: return "vsm";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    auto l = detail::to_lower(detail::trim(s));
    for (auto m : kAllMethods)
        if (l == to_string(m)) return m;
    throw InputError("unknown method '" + std::string(s) + "' (asags, erb, keywords, vsm)");
}

inline constexpr std::uint64_t kDefaultSeed = 42;

inline StageList default_stages() {
    return {MatcherStage::exact(), MatcherStage::stem(), MatcherStage::heuristic()};
}

/// Everything a run depends on besides the data.
struct Grader {
    StopList stoplist;
    Resources resources;
    StageList stages = default_stages();
    ScoringConfig config;
    std::uint64_t seed = kDefaultSeed;
    int erb_max_n = kErbDefaultMaxN;
};

/// A dataset with its texts preprocessed once.
struct PreparedDataset {
    Dataset dataset;
    std::vector<ReferenceText> references;
    std::vector<ProcessedText> answers;
    std::vector<double> human;

    std::vector<const ProcessedText*> reference_texts() const {
        std::vector<const ProcessedText*> out;
        for (const auto& r : references) out.push_back(&r.text);
        return out;
    }
    std::vector<double> reference_weights() const {
        std::vector<double> out;
        for (const auto& r : references) out.push_back(r.weight);
        return out;
    }
};

inline PreparedDataset prepare(const Dataset& d, const StopList& stoplist) {
    PreparedDataset p;
    p.dataset = d;
    for (const auto& r : d.references) p.references.push_back({r.id, preprocess(r.text, stoplist), r.weight});
    for (const auto& a : d.answers) {
        p.answers.push_back(preprocess(a.text, stoplist));
        p.human.push_back(a.human_score);
    }
    return p;
}

/// Canonical description of everything that determines a run's scores.
inline std::string describe_run(Method method, const Grader& g) {
    std::ostringstream out;
    out << "method = " << to_string(method) << '\n';
    switch (method) {
        case Method::asags:
            out << serialize_scoring(g.config, g.stages);
            break;
        case Method::erb:
            out << "max_n = " << g.erb_max_n << '\n';
            break;
        case Method::vsm:
            out << "seed = " << g.seed << '\n';
            break;
        case Method::keywords:
            break;
    }
    std::ostringstream res;
    for (const auto& w : g.stoplist.words()) res << w << '\n';
    if (method == Method::asags) {
        write_synonyms(res, g.resources.synonyms);
        for (const auto& [l, r] : g.resources.derivations.entries()) res << l << '\t' << r << '\n';
        for (const auto& e : g.resources.gazetteer.entries())
            for (const auto& f : e.forms()) res << f << ';';
    }
    out << "resources = " << digest(res.str()) << '\n';
    return out.str();
}

struct MachineScores {
    std::vector<double> scores;  // in [0,1], aligned with the answers
    std::size_t flagged = 0;     // answers scored 0 after an input error
    std::optional<std::string> not_evaluable;
};

inline MachineScores machine_scores(const PreparedDataset& p, Method method, const Grader& g) {
    MachineScores out;
    const auto refs = p.reference_texts();
    if (method == Method::vsm) {
        auto r = five_fold_evaluate(p.answers, refs, g.seed);
        if (!r.evaluable) {
            out.not_evaluable = r.reason;
            out.scores.assign(p.answers.size(), 0.0);
        } else {
            out.scores = std::move(r.scores);
        }
        return out;
    }
    for (const auto& a : p.answers) {
        double s = 0;
        try {
            switch (method) {
                case Method::asags: s = score_answer(a, p.references, g.config, g.stages, g.resources).combined_score; break;
                case Method::erb: s = erb_score(a, refs, g.erb_max_n); break;
                case Method::keywords: s = keyword_score(a, refs); break;
                case Method::vsm: break;
            }
        } catch (const InputError&) {
            s = 0;
            ++out.flagged;
        }
        out.scores.push_back(s);
    }
    return out;
}

struct ReportRow {
    std::string dataset_id;
    std::string method;
    std::string config;         // describe_run text
    std::string config_digest;  // digest of `config`
    std::optional<double> r;
    std::string note;  // why r is absent
    std::size_t n = 0;
    std::size_t flagged = 0;
    std::vector<double> machine;  // on the dataset's grade scale
};

inline ReportRow evaluate(const PreparedDataset& p, Method method, const Grader& g) {
    ReportRow row;
    row.dataset_id = p.dataset.dataset_id;
    row.method = std::string(to_string(method));
    row.config = describe_run(method, g);
    row.config_digest = digest(row.config);
    row.n = p.answers.size();
    auto ms = machine_scores(p, method, g);
    row.flagged = ms.flagged;
    for (double s : ms.scores) row.machine.push_back(to_grade(s, p.dataset.scale));
    if (ms.not_evaluable) {
        row.note = *ms.not_evaluable;
        return row;
    }
    row.r = pearson(row.machine, p.human);
    if (!row.r) row.note = p.answers.size() < 2 ? "fewer than 2 answers" : "zero variance";
    return row;
}

// ---------------------------------------------------------------------------
// experiments

inline std::optional<double> mean_defined(std::span<const std::optional<double>> values) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& v : values)
        if (v) {
            sum += *v;
            ++n;
        }
    if (n == 0) return std::nullopt;
    return sum / static_cast<double>(n);
}

struct SweepPoint {
    int max_n = 1;
    std::optional<double> r;
};

/// Correlation for N = 1..4 with uniform n-gram weights.
inline std::vector<SweepPoint> ngram_sweep(const PreparedDataset& p, const Grader& g) {
    std::vector<SweepPoint> out;
    for (int n = 1; n <= 4; ++n) {
        Grader run = g;
        run.config.max_n = n;
        run.config.ngram_weights.clear();
        out.push_back({n, evaluate(p, Method::asags, run).r});
    }
    return out;
}

struct ComponentPoint {
    ScoreComponent component = ScoreComponent::full;
    std::optional<double> r;
};

inline constexpr std::array<ScoreComponent, 4> kComponentOrder = {ScoreComponent::precision, ScoreComponent::recall,
                                                                  ScoreComponent::fmean, ScoreComponent::penalized};

/// Correlation of each score component. Answers are aligned and scored once;
/// the four components are read off the same breakdowns.
inline std::vector<ComponentPoint> metric_comparison(const PreparedDataset& p, const Grader& g) {
    std::vector<std::optional<ScoreBreakdown>> cached;
    for (const auto& a : p.answers) {
        try {
            cached.emplace_back(score_answer(a, p.references, g.config, g.stages, g.resources));
        } catch (const InputError&) {
            cached.emplace_back(std::nullopt);
        }
    }
    const auto weights = p.reference_weights();
    std::vector<ComponentPoint> out;
    for (auto c : kComponentOrder) {
        std::vector<double> machine;
        for (const auto& b : cached) machine.push_back(to_grade(b ? b->combined(c, g.config, weights) : 0.0, p.dataset.scale));
        out.push_back({c, pearson(machine, p.human)});
    }
    return out;
}

struct AblationRow {
    std::string label;
    StageList stages;
    std::optional<double> r;
};

/// Published correlations for the four stage sets, in row order.
inline constexpr std::array<double, 4> kAblationTargets = {0.46, 0.48, 0.49, 0.59};

/// Exact; Exact+Stem; Exact+Heuristics; Exact+Stem+Heuristics. The heuristic
/// rules are taken from the grader's stage list when it has a heuristic stage.
inline std::vector<AblationRow> module_ordering_experiment(const PreparedDataset& p, const Grader& g) {
    auto heuristic = MatcherStage::heuristic();
    for (const auto& s : g.stages)
        if (s.kind == StageKind::heuristic) heuristic = s;
    const std::vector<std::pair<std::string, StageList>> sets = {
        {"Exact only", {MatcherStage::exact()}},
        {"Exact, Porter Stemmer", {MatcherStage::exact(), MatcherStage::stem()}},
        {"Exact, Heuristics", {MatcherStage::exact(), heuristic}},
        {"Exact, Porter Stemmer, Heuristics", {MatcherStage::exact(), MatcherStage::stem(), heuristic}},
    };
    std::vector<AblationRow> out;
    for (const auto& [label, stages] : sets) {
        Grader run = g;
        run.stages = stages;
        out.push_back({label, stages, evaluate(p, Method::asags, run).r});
    }
    return out;
}

struct ComparisonTable {
    std::vector<std::string> dataset_ids;
    std::vector<std::array<std::optional<double>, 4>> rows;  // columns in kAllMethods order
    std::array<std::optional<double>, 4> average;            // over evaluable datasets
};

/// Published per-dataset correlations (asags, erb, keywords, vsm), ten
/// datasets; NaN marks a dataset the VSM could not evaluate.
inline constexpr double kComparisonTargets[10][4] = {
    {0.73, 0.58, 0.07, 0.31}, {0.41, 0.36, 0.23, 0.09}, {0.41, 0.36, 0.19, 0.24}, {0.53, 0.82, 0.57, NAN},
    {0.46, 0.41, 0.57, 0.52}, {0.09, 0.02, -0.05, 0.05}, {0.41, 0.21, 0.32, 0.17}, {0.51, 0.41, 0.22, 0.17},
    {0.81, 0.73, 0.24, NAN},  {0.85, 0.75, 0.09, NAN},
};

inline ComparisonTable method_comparison(std::span<const PreparedDataset> datasets, const Grader& g) {
    if (datasets.empty()) throw InputError("method comparison needs at least one dataset");
    ComparisonTable t;
    for (const auto& p : datasets) {
        t.dataset_ids.push_back(p.dataset.dataset_id);
        std::array<std::optional<double>, 4> row;
        for (std::size_t m = 0; m < kAllMethods.size(); ++m) row[m] = evaluate(p, kAllMethods[m], g).r;
        t.rows.push_back(row);
    }
    for (std::size_t m = 0; m < kAllMethods.size(); ++m) {
        std::vector<std::optional<double>> col;
        for (const auto& row : t.rows) col.push_back(row[m]);
        t.average[m] = mean_defined(col);
    }
    return t;
}

// ---------------------------------------------------------------------------
// output

inline constexpr std::string_view kNotEvaluable = "-----";

inline std::string format_r(const std::optional<double>& r) {
    if (!r) return std::string(kNotEvaluable);
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << (*r == 0 ? 0.0 : *r);
    return out.str();
}

inline void write_report_csv(std::ostream& out, std::span<const ReportRow> rows) {
    csv::write_row(out, {"dataset_id", "method", "config_digest", "r", "n", "flagged", "note"});
    for (const auto& row : rows)
        csv::write_row(out, {row.dataset_id, row.method, row.config_digest, format_r(row.r), std::to_string(row.n),
                             std::to_string(row.flagged), row.note});
}

inline nlohmann::ordered_json report_to_json(std::span<const ReportRow> rows) {
    nlohmann::ordered_json doc;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json j;
        j["dataset_id"] = row.dataset_id;
        j["method"] = row.method;
        j["config_digest"] = row.config_digest;
        j["config"] = row.config;
        j["r"] = row.r ? nlohmann::ordered_json(*row.r) : nlohmann::ordered_json(nullptr);
        j["n"] = row.n;
        j["flagged"] = row.flagged;
        j["note"] = row.note;
        j["machine_scores"] = row.machine;
        doc["rows"].push_back(std::move(j));
    }
    return doc;
}

/// x,y rows: N against the mean correlation over the datasets.
inline void write_sweep_csv(std::ostream& out, std::span<const std::vector<SweepPoint>> per_dataset) {
    csv::write_row(out, {"x", "y"});
    for (int n = 1; n <= 4; ++n) {
        std::vector<std::optional<double>> col;
        for (const auto& d : per_dataset) col.push_back(d[static_cast<std::size_t>(n - 1)].r);
        csv::write_row(out, {std::to_string(n), format_r(mean_defined(col))});
    }
}

inline void write_metrics_csv(std::ostream& out, std::span<const std::vector<ComponentPoint>> per_dataset) {
    csv::write_row(out, {"x", "y"});
    for (std::size_t c = 0; c < kComponentOrder.size(); ++c) {
        std::vector<std::optional<double>> col;
        for (const auto& d : per_dataset) col.push_back(d[c].r);
        csv::write_row(out, {std::string(to_string(kComponentOrder[c])), format_r(mean_defined(col))});
    }
}

inline void write_ablation_csv(std::ostream& out, std::span<const std::vector<AblationRow>> per_dataset) {
    csv::write_row(out, {"exp", "mapping_modules", "stages", "r"});
    const auto& first = per_dataset.front();
    for (std::size_t i = 0; i < first.size(); ++i) {
        std::vector<std::optional<double>> col;
        for (const auto& d : per_dataset) col.push_back(d[i].r);
        csv::write_row(out, {std::to_string(i + 1), first[i].label, format_stages(first[i].stages), format_r(mean_defined(col))});
    }
    out << "# published targets:";
    for (std::size_t i = 0; i < kAblationTargets.size(); ++i) out << ' ' << format_r(kAblationTargets[i]);
    out << '\n';
}

inline void write_comparison_csv(std::ostream& out, const ComparisonTable& t) {
    std::vector<std::string> header{"dataset"};
    for (auto m : kAllMethods) header.emplace_back(to_string(m));
    csv::write_row(out, header);
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        std::vector<std::string> fields{t.dataset_ids[i]};
        for (const auto& r : t.rows[i]) fields.push_back(format_r(r));
        csv::write_row(out, fields);
    }
    std::vector<std::string> avg{"average"};
    for (const auto& r : t.average) avg.push_back(format_r(r));
    csv::write_row(out, avg);
    out << "# published targets (dataset: asags erb keywords vsm):\n";
    for (std::size_t d = 0; d < std::size(kComparisonTargets); ++d) {
        out << "# " << d + 1 << ':';
        for (double v : kComparisonTargets[d]) out << ' ' << format_r(std::isnan(v) ? std::nullopt : std::optional<double>(v));
        out << '\n';
    }
}

}  // namespace asags
