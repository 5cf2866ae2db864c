#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "protoguard/auto_labeler.hpp"
#include "protoguard/serialize.hpp"
#include "protoguard/significance.hpp"

namespace {

struct RunConfig {
    double learn_alpha = 0.05;
    double verify_alpha = 0.001;
    int min_support_k = 3;
    int max_pattern_length = 6;
    double tuples_per_page = 1.0;
    bool plain = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::vector<pg::TokenStream> to_streams(const std::vector<std::string>& lines, bool html_aware) {
    std::vector<pg::TokenStream> out;
    for (size_t i = 0; i < lines.size(); ++i) {
        pg::TokenStream s;
        s.source_id = std::to_string(i);
        s.tokens = pg::tokenize(lines[i], html_aware);
        out.push_back(std::move(s));
    }
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

void validate(const RunConfig& cfg) {
    if (cfg.learn_alpha <= 0.0 || cfg.learn_alpha >= 1.0) throw std::runtime_error("alpha outside (0,1)");
    if (cfg.verify_alpha <= 0.0 || cfg.verify_alpha >= 1.0) throw std::runtime_error("verify alpha outside (0,1)");
    if (cfg.min_support_k < 2) throw std::runtime_error("k must be at least 2");
    if (cfg.max_pattern_length < 1) throw std::runtime_error("max pattern length must be at least 1");
    if (cfg.tuples_per_page <= 0.0) throw std::runtime_error("tuples per page must be positive");
}

int cmd_learn(const std::string& examples_file, const std::string& field,
              const std::string& out_path, const RunConfig& cfg) {
    auto lines = read_lines(examples_file);
    if (lines.size() < 2) {
        std::cerr << "learn: need at least two non-empty examples\n";
        return 1;
    }
    auto examples = to_streams(lines, !cfg.plain);
    auto table = pg::build_type_table(examples, cfg.min_support_k);
    auto proto = pg::learn_prototype(field, examples, table, cfg.learn_alpha, cfg.max_pattern_length);
    auto profile = pg::profile_field(field, examples, cfg.tuples_per_page, proto);
    for (const auto& p : proto.start_patterns) std::cout << pg::pattern_to_string(p) << "\n";
    if (!out_path.empty()) {
        pg::FieldArtifact a;
        a.field = field;
        a.proto = proto;
        a.profile = profile;
        a.learn_alpha = cfg.learn_alpha;
        a.min_support_k = cfg.min_support_k;
        a.max_pattern_length = cfg.max_pattern_length;
        a.tuples_per_page = cfg.tuples_per_page;
        pg::save_artifact(out_path, a);
    }
    return 0;
}

int cmd_verify(const std::vector<std::string>& profile_paths, const std::string& test_file,
               const RunConfig& cfg) {
    std::vector<pg::FieldProfile> profiles;
    for (const auto& path : profile_paths) profiles.push_back(pg::load_artifact(path).profile);
    auto tuples = pg::parse_tuples(read_file(test_file));
    std::map<std::string, std::vector<pg::TokenStream>> tests;
    for (const auto& field : tuples.fields) {
        std::vector<pg::TokenStream> streams;
        for (const auto& value : tuples.column(field)) {
            pg::TokenStream s;
            s.tokens = pg::tokenize(value, !cfg.plain);
            streams.push_back(std::move(s));
        }
        tests[field] = std::move(streams);
    }
    auto sv = pg::verify_source(profiles, tests, cfg.tuples_per_page, cfg.verify_alpha);
    for (const auto& [field, v] : sv.fields) {
        std::cout << "field " << field << ' ' << (v.ok ? "OK" : "CHANGED")
                  << " q=" << fmt(v.q) << " thr=" << fmt(v.threshold)
                  << " reason=" << v.reason << "\n";
    }
    std::cout << "source " << (sv.ok ? "OK" : "CHANGED") << "\n";
    return sv.ok ? 0 : 2;
}

int cmd_template(const std::vector<std::string>& page_files, const std::string& out_path,
                 const RunConfig& cfg) {
    if (page_files.size() < 2) {
        std::cerr << "template: need at least two pages\n";
        return 1;
    }
    std::vector<pg::TokenStream> pages;
    for (const auto& path : page_files) {
        pg::TokenStream s;
        s.source_id = path;
        s.tokens = pg::tokenize(read_file(path), !cfg.plain);
        pages.push_back(std::move(s));
    }
    auto tpl = pg::find_template(pages);
    std::string serialized = pg::serialize_template(tpl);
    std::cout << serialized;
    if (!out_path.empty()) write_file(out_path, serialized);
    return 0;
}

int cmd_label(const std::vector<std::string>& page_files,
              const std::vector<std::string>& prototype_paths,
              const std::string& old_file, const std::string& out_path,
              const std::string& report_path, const RunConfig& cfg) {
    if (page_files.size() < 2) {
        std::cerr << "label: need at least two pages\n";
        return 1;
    }
    std::vector<std::pair<std::string, pg::TokenStream>> pages;
    std::vector<pg::TokenStream> streams;
    for (const auto& path : page_files) {
        pg::TokenStream s;
        s.source_id = path;
        s.tokens = pg::tokenize(read_file(path), !cfg.plain);
        streams.push_back(s);
        pages.emplace_back(path, std::move(s));
    }
    auto tpl = pg::find_template(streams);

    pg::TupleSet old_tuples;
    bool have_old = !old_file.empty();
    if (have_old) old_tuples = pg::parse_tuples(read_file(old_file));

    std::map<std::string, pg::FieldModel> fields;
    for (const auto& path : prototype_paths) {
        auto artifact = pg::load_artifact(path);
        pg::FieldModel model;
        model.proto = artifact.proto;
        model.profile = artifact.profile;
        if (have_old) {
            for (const auto& f : old_tuples.fields)
                if (f == artifact.field) model.old_values = old_tuples.column(f);
        }
        fields[artifact.field] = std::move(model);
    }
    if (fields.empty()) {
        std::cerr << "label: no prototypes given\n";
        return 1;
    }
    auto result = pg::label_pages(pages, tpl, fields);
    std::string labels = pg::format_labels(result.labels);
    std::cout << labels;
    std::ostringstream report;
    for (const auto& c : result.coverage)
        report << "field " << c.field << ' ' << c.status
               << " labeled=" << c.pages_labeled << '/' << c.pages_total << "\n";
    std::cout << report.str();
    if (!out_path.empty()) write_file(out_path, labels);
    if (!report_path.empty()) write_file(report_path, report.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"data prototype learning, verification and relabeling"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file");

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--alpha", cfg.learn_alpha, "pattern learning significance level");
        sub->add_option("--verify-alpha", cfg.verify_alpha, "verification significance level");
        sub->add_option("--k", cfg.min_support_k, "distinct-example support for specific types");
        sub->add_option("--max-pattern-len", cfg.max_pattern_length, "maximum pattern length");
        sub->add_option("--tuples-per-page", cfg.tuples_per_page, "expected tuples per page");
        sub->add_flag("--plain", cfg.plain, "disable HTML-aware tokenization");
        sub->add_option("--config", config_path, "JSON config file");
    };

    std::string examples_file, field = "field", out_path, test_file, old_file, report_path;
    std::vector<std::string> profile_paths, page_files, prototype_paths;

    CLI::App* learn = app.add_subcommand("learn", "learn a prototype from examples");
    learn->add_option("examples", examples_file, "file with one example per line")->required();
    learn->add_option("--field", field, "field name");
    learn->add_option("--out", out_path, "artifact output path");
    add_common(learn);

    CLI::App* verify = app.add_subcommand("verify", "verify test tuples against profiles");
    verify->add_option("tests", test_file, "tab separated test tuples with header")->required();
    verify->add_option("--profile", profile_paths, "field artifact (repeatable)")->required();
    add_common(verify);

    CLI::App* tpl = app.add_subcommand("template", "extract the shared page template");
    tpl->add_option("pages", page_files, "page files");
    tpl->add_option("--out", out_path, "template output path");
    add_common(tpl);

    CLI::App* label = app.add_subcommand("label", "label fields on changed pages");
    label->add_option("pages", page_files, "page files");
    label->add_option("--prototypes", prototype_paths, "field artifact (repeatable)")->required();
    label->add_option("--old", old_file, "tab separated old tuples with header");
    label->add_option("--out", out_path, "labels output path");
    label->add_option("--report", report_path, "coverage report path");
    add_common(label);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (!config_path.empty()) {
            auto j = nlohmann::json::parse(read_file(config_path));
            CLI::App* sub = app.get_subcommands().front();
            auto unset = [&](const std::string& name) {
                return sub->count(name) == 0;
            };
            if (j.contains("alpha") && unset("--alpha")) cfg.learn_alpha = j["alpha"].get<double>();
            if (j.contains("verify_alpha") && unset("--verify-alpha")) cfg.verify_alpha = j["verify_alpha"].get<double>();
            if (j.contains("k") && unset("--k")) cfg.min_support_k = j["k"].get<int>();
            if (j.contains("max_pattern_len") && unset("--max-pattern-len")) cfg.max_pattern_length = j["max_pattern_len"].get<int>();
            if (j.contains("tuples_per_page") && unset("--tuples-per-page")) cfg.tuples_per_page = j["tuples_per_page"].get<double>();
            if (j.contains("plain") && unset("--plain")) cfg.plain = j["plain"].get<bool>();
        }
        validate(cfg);
        if (learn->parsed()) return cmd_learn(examples_file, field, out_path, cfg);
        if (verify->parsed()) return cmd_verify(profile_paths, test_file, cfg);
        if (tpl->parsed()) return cmd_template(page_files, out_path, cfg);
        if (label->parsed()) return cmd_label(page_files, prototype_paths, old_file, out_path, report_path, cfg);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
