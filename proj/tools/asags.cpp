// asags: grade short answers, evaluate scorers against human grades, and
// regenerate the experiment tables.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asags/asags.hpp"

#ifndef ASAGS_DEFAULT_RESOURCES
#define ASAGS_DEFAULT_RESOURCES "data"
#endif

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Thrown for anything the user must fix in flags, config or resources.
struct ConfigError : asags::Error {
    using asags::Error::Error;
};

struct Flags {
    std::string config;
    std::string resources;
    std::optional<std::string> stages;
    std::optional<int> max_n;
    std::optional<double> alpha;
    std::optional<double> gamma;
    std::optional<double> beta;
    std::optional<std::string> combination;
    std::optional<std::string> scale;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::optional<std::string> format;
};

struct RunConfig {
    asags::Grader grader;
    std::optional<asags::GradeScale> scale;  // overrides dataset scales
    std::string out;
    std::string format = "csv";
};

void add_common_flags(CLI::App& cmd, Flags& f) {
    cmd.add_option("--config", f.config, "key = value configuration file (flags override it)");
    cmd.add_option("--resources", f.resources, "resource directory (default: $ASAGS_RESOURCES, then the bundled data)");
    cmd.add_option("--stages", f.stages, "matcher stages, e.g. exact,stem,heuristic(synonym,numeric)");
    cmd.add_option("--max-n", f.max_n, "largest n-gram order")->check(CLI::Range(1, 16));
    cmd.add_option("--alpha", f.alpha, "F-mean precision weight");
    cmd.add_option("--gamma", f.gamma, "fragmentation penalty ceiling");
    cmd.add_option("--beta", f.beta, "fragmentation penalty exponent");
    cmd.add_option("--combination", f.combination, "best or average over references");
    cmd.add_option("--scale", f.scale, "grade scale MIN:MAX");
    cmd.add_option("--seed", f.seed, "fold-assignment seed (default 42)");
    cmd.add_option("--out", f.out, "output directory (default: standard output)");
    cmd.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

asags::GradeScale parse_scale(std::string_view text) {
    auto sep = text.find_first_of(":,");
    if (sep == std::string_view::npos) throw ConfigError("scale must be MIN:MAX, got '" + std::string(text) + "'");
    asags::GradeScale s;
    s.min_grade = asags::detail::parse_double("scale", asags::detail::trim(text.substr(0, sep)));
    s.max_grade = asags::detail::parse_double("scale", asags::detail::trim(text.substr(sep + 1)));
    s.validate();
    return s;
}

std::string resolve(const fs::path& base, const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path.string() : (base / path).string();
}

RunConfig build_run_config(const Flags& f) {
    RunConfig rc;
    auto& g = rc.grader;
    fs::path resource_dir;
    std::optional<std::string> stoplist_path;
    auto paths = asags::ResourcePaths{};

    if (const char* env = std::getenv("ASAGS_RESOURCES"); env && *env) resource_dir = env;
    else resource_dir = ASAGS_DEFAULT_RESOURCES;

    asags::KeyValues kv;
    fs::path config_dir = ".";
    if (!f.config.empty()) {
        kv = asags::load_key_values(f.config);
        config_dir = fs::path(f.config).parent_path();
        if (config_dir.empty()) config_dir = ".";
    }
    std::optional<fs::path> config_resources;
    for (const auto& [key, value] : kv) {
        if (asags::apply_scoring_option(g.config, g.stages, key, value)) continue;
        if (key == "seed") {
            g.seed = static_cast<std::uint64_t>(asags::detail::parse_int(key, value));
        } else if (key == "erb_max_n") {
            g.erb_max_n = static_cast<int>(asags::detail::parse_int(key, value));
        } else if (key == "scale") {
            rc.scale = parse_scale(value);
        } else if (key == "format") {
            if (value != "csv" && value != "json") throw ConfigError("format must be csv or json");
            rc.format = value;
        } else if (key == "out") {
            rc.out = resolve(config_dir, value);
        } else if (key == "resources") {
            config_resources = resolve(config_dir, value);
        } else if (key == "stoplist") {
            stoplist_path = resolve(config_dir, value);
        } else if (key == "synonyms") {
            paths.synonyms = resolve(config_dir, value);
        } else if (key == "derivations") {
            paths.derivations = resolve(config_dir, value);
        } else if (key == "gazetteer") {
            paths.gazetteer = resolve(config_dir, value);
        } else {
            throw ConfigError(f.config + ": unknown key '" + key + "'");
        }
    }
    if (config_resources) resource_dir = *config_resources;
    if (!f.resources.empty()) resource_dir = f.resources;

    if (f.stages) g.stages = asags::parse_stages(*f.stages);
    if (f.max_n) {
        g.config.max_n = *f.max_n;
        g.config.ngram_weights.clear();
    }
    if (f.alpha) g.config.alpha = *f.alpha;
    if (f.gamma) g.config.gamma = *f.gamma;
    if (f.beta) g.config.beta = *f.beta;
    if (f.combination) g.config.combination = asags::parse_combination(*f.combination);
    if (f.scale) rc.scale = parse_scale(*f.scale);
    if (f.seed) g.seed = *f.seed;
    if (!f.out.empty()) rc.out = f.out;
    if (f.format) rc.format = *f.format;
    g.config.validate();

    const auto defaults = asags::ResourcePaths::in_directory(resource_dir);
    if (paths.synonyms.empty()) paths.synonyms = defaults.synonyms;
    if (paths.derivations.empty()) paths.derivations = defaults.derivations;
    if (paths.gazetteer.empty()) paths.gazetteer = defaults.gazetteer;
    g.resources = asags::load_resources(paths);
    g.stoplist = asags::load_stoplist(stoplist_path.value_or((resource_dir / "stopwords.txt").string()));
    return rc;
}

// Writes `content` to <out>/<name>, or to standard output when no directory
// was given.
void emit(const RunConfig& rc, const std::string& name, const std::string& content) {
    if (rc.out.empty()) {
        std::cout << content;
        return;
    }
    fs::create_directories(rc.out);
    const auto path = fs::path(rc.out) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << content;
    std::cerr << "wrote " << path.string() << '\n';
}

struct LoadedData {
    std::vector<asags::PreparedDataset> datasets;
    std::vector<std::string> errors;
};

LoadedData load_all(const std::vector<std::string>& paths, const RunConfig& rc) {
    LoadedData out;
    for (const auto& p : paths) {
        try {
            for (auto d : asags::load_datasets(p)) {
                if (rc.scale) {
                    for (const auto& a : d.answers)
                        if (!rc.scale->contains(a.human_score))
                            throw asags::LoadError(p, 0, "answer '" + a.id + "': human score outside --scale");
                    d.scale = *rc.scale;
                }
                out.datasets.push_back(asags::prepare(d, rc.grader.stoplist));
            }
        } catch (const asags::ResourceError& e) {
            out.errors.push_back(e.what());
        } catch (const asags::LoadError& e) {
            out.errors.push_back(e.what());
        }
    }
    return out;
}

void print_errors(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    std::cerr << "errors:\n";
    for (const auto& e : errors) std::cerr << "  " << e << '\n';
}

int cmd_grade(const Flags& flags, const std::string& question, const std::string& answer_file,
              const std::optional<std::string>& answer_text) {
    auto rc = build_run_config(flags);
    asags::Dataset q;
    try {
        q = asags::parse_dataset_json(asags::read_file(question), question, false);
    } catch (const asags::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
    if (rc.scale) q.scale = *rc.scale;
    std::string text;
    if (answer_text) {
        text = *answer_text;
    } else if (answer_file == "-") {
        std::ostringstream buf;
        buf << std::cin.rdbuf();
        text = buf.str();
    } else {
        try {
            text = asags::read_file(answer_file);
        } catch (const asags::ResourceError& e) {
            std::cerr << "error: " << e.what() << '\n';
            return kExitData;
        }
    }

    const auto& g = rc.grader;
    std::vector<asags::ReferenceText> refs;
    for (const auto& r : q.references) refs.push_back({r.id, asags::preprocess(r.text, g.stoplist), r.weight});
    const auto student = asags::preprocess(text, g.stoplist);
    if (student.content_tokens.empty()) std::cerr << "warning: the answer has no content words; grade is the scale minimum\n";

    asags::ScoreBreakdown b;
    try {
        b = asags::score_answer(student, refs, g.config, g.stages, g.resources);
    } catch (const asags::InputError& e) {
        std::cerr << "error: " << q.dataset_id << ": " << e.what() << '\n';
        return kExitData;
    }
    const auto fb = asags::feedback(b, student, refs, q.scale);
    auto words = [](const std::vector<asags::Token>& toks) {
        std::vector<std::string> out;
        for (const auto& t : toks) out.push_back(t.surface);
        return out;
    };

    if (rc.format == "json") {
        nlohmann::ordered_json j;
        j["dataset_id"] = q.dataset_id;
        j["score"] = b.combined_score;
        j["grade"] = fb.grade;
        j["scale"] = {{"min", q.scale.min_grade}, {"max", q.scale.max_grade}};
        j["reference"] = fb.reference_id;
        j["matched"] = words(fb.matched_content);
        j["unmatched_reference"] = words(fb.unmatched_reference_content);
        emit(rc, "grade.json", j.dump(2) + "\n");
        return kExitOk;
    }
    std::ostringstream out;
    out << "grade: " << asags::format_grade(fb.grade) << " (scale " << asags::detail::format_double(q.scale.min_grade)
        << " to " << asags::detail::format_double(q.scale.max_grade) << ")\n";
    out << "score: " << std::fixed << std::setprecision(4) << b.combined_score << '\n';
    out << "reference: " << fb.reference_id << '\n';
    auto line = [&](const char* label, const std::vector<std::string>& ws) {
        out << label << ':';
        for (const auto& w : ws) out << ' ' << w;
        out << '\n';
    };
    line("matched", words(fb.matched_content));
    line("missing", words(fb.unmatched_reference_content));
    emit(rc, "grade.txt", out.str());
    return kExitOk;
}

int cmd_evaluate(const Flags& flags, const std::vector<std::string>& paths, const std::string& method_name) {
    auto rc = build_run_config(flags);
    const auto method = asags::parse_method(method_name);
    auto data = load_all(paths, rc);
    print_errors(data.errors);
    if (data.datasets.empty()) {
        std::cerr << "error: no dataset could be loaded\n";
        return kExitData;
    }
    std::vector<asags::ReportRow> rows;
    for (const auto& p : data.datasets) rows.push_back(asags::evaluate(p, method, rc.grader));

    if (rc.format == "json") {
        auto doc = asags::report_to_json(rows);
        doc["errors"] = data.errors;
        emit(rc, "report.json", doc.dump(2) + "\n");
    } else {
        std::ostringstream csv;
        asags::write_report_csv(csv, rows);
        emit(rc, "report.csv", csv.str());
    }
    if (!rc.out.empty()) {
        std::cout << std::left << std::setw(16) << "dataset" << std::setw(10) << "method" << "r\n";
        for (const auto& r : rows)
            std::cout << std::setw(16) << r.dataset_id << std::setw(10) << r.method << asags::format_r(r.r) << '\n';
    }
    return kExitOk;
}

int cmd_experiment(const Flags& flags, const std::string& name, const std::vector<std::string>& paths) {
    auto rc = build_run_config(flags);
    auto data = load_all(paths, rc);
    print_errors(data.errors);
    if (data.datasets.empty()) {
        std::cerr << "error: no dataset could be loaded\n";
        return kExitData;
    }
    const auto& g = rc.grader;
    std::ostringstream csv;
    std::string file;
    if (name == "sweep") {
        std::vector<std::vector<asags::SweepPoint>> all;
        for (const auto& p : data.datasets) all.push_back(asags::ngram_sweep(p, g));
        asags::write_sweep_csv(csv, all);
        file = "fig2.csv";
    } else if (name == "metrics") {
        std::vector<std::vector<asags::ComponentPoint>> all;
        for (const auto& p : data.datasets) all.push_back(asags::metric_comparison(p, g));
        asags::write_metrics_csv(csv, all);
        file = "fig3.csv";
    } else if (name == "ablation") {
        std::vector<std::vector<asags::AblationRow>> all;
        for (const auto& p : data.datasets) all.push_back(asags::module_ordering_experiment(p, g));
        asags::write_ablation_csv(csv, all);
        file = "table1.csv";
    } else {
        asags::write_comparison_csv(csv, asags::method_comparison(data.datasets, g));
        file = "table2.csv";
    }
    emit(rc, file, csv.str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short-answer grading with an enhanced BLEU scorer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "asags 1.0.0");

    Flags flags;

    auto* grade = app.add_subcommand("grade", "grade one answer against a question file");
    std::string question;
    std::string answer_file = "-";
    std::optional<std::string> answer_text;
    grade->add_option("question", question, "question JSON (references; answers optional)")->required();
    grade->add_option("--answer-file", answer_file, "student answer file, '-' for standard input");
    grade->add_option("--text", answer_text, "student answer given inline");
    add_common_flags(*grade, flags);

    auto* evaluate = app.add_subcommand("evaluate", "correlate a scorer with human grades");
    std::vector<std::string> eval_paths;
    std::string method = "asags";
    evaluate->add_option("datasets", eval_paths, "dataset JSON files or benchmark CSV exports")->required();
    evaluate->add_option("--method", method, "asags, erb, keywords or vsm");
    add_common_flags(*evaluate, flags);

    auto* experiment = app.add_subcommand("experiment", "regenerate an experiment table or figure");
    std::string experiment_name;
    std::vector<std::string> exp_paths;
    experiment->add_option("name", experiment_name, "sweep, metrics, ablation or compare")
        ->required()
        ->check(CLI::IsMember({"sweep", "metrics", "ablation", "compare"}));
    experiment->add_option("datasets", exp_paths, "dataset JSON files or benchmark CSV exports")->required();
    add_common_flags(*experiment, flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*grade) return cmd_grade(flags, question, answer_file, answer_text);
        if (*evaluate) return cmd_evaluate(flags, eval_paths, method);
        return cmd_experiment(flags, experiment_name, exp_paths);
    } catch (const asags::LoadError& e) {
        // resource files (stoplist, lexicons, config) are configuration
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const asags::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    }
}
