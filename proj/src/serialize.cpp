#include "protoguard/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace pg {

namespace {

using json = nlohmann::ordered_json;

json patterns_to_json(const std::vector<Pattern>& patterns) {
    json arr = json::array();
    for (const auto& p : patterns) arr.push_back(p);
    return arr;
}

std::vector<Pattern> patterns_from_json(const json& arr) {
    std::vector<Pattern> out;
    for (const auto& p : arr) out.push_back(p.get<Pattern>());
    return out;
}

}  // namespace

std::string serialize_artifact(const FieldArtifact& a) {
    json j;
    j["format_version"] = kFormatVersion;
    j["field"] = a.field;
    j["config"] = {
        {"learn_alpha", a.learn_alpha},
        {"min_support_k", a.min_support_k},
        {"max_pattern_length", a.max_pattern_length},
        {"tuples_per_page", a.tuples_per_page},
    };
    j["prototype"] = {
        {"start_patterns", patterns_to_json(a.proto.start_patterns)},
        {"end_patterns", patterns_to_json(a.proto.end_patterns)},
        {"token_count_mean", a.proto.token_count_mean},
        {"token_count_var", a.proto.token_count_var},
        {"sample_size", a.proto.sample_size},
    };
    json numeric;
    for (int i = 0; i < kNumericFeatureCount; ++i)
        numeric[kNumericFeatureNames[static_cast<size_t>(i)]] = a.profile.numeric[static_cast<size_t>(i)];
    j["profile"] = {
        {"patterns", patterns_to_json(a.profile.patterns)},
        {"pattern_counts", a.profile.pattern_counts},
        {"sample_size", a.profile.sample_size},
        {"numeric", numeric},
    };
    return j.dump(2) + "\n";
}

FieldArtifact deserialize_artifact(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("artifact parse error: ") + e.what());
    }
    if (!j.contains("format_version") || j["format_version"].get<int>() != kFormatVersion)
        throw std::runtime_error("artifact format_version mismatch");
    FieldArtifact a;
    try {
        a.field = j.at("field").get<std::string>();
        const auto& cfg = j.at("config");
        a.learn_alpha = cfg.at("learn_alpha").get<double>();
        a.min_support_k = cfg.at("min_support_k").get<int>();
        a.max_pattern_length = cfg.at("max_pattern_length").get<int>();
        a.tuples_per_page = cfg.at("tuples_per_page").get<double>();
        const auto& proto = j.at("prototype");
        a.proto.field = a.field;
        a.proto.start_patterns = patterns_from_json(proto.at("start_patterns"));
        a.proto.end_patterns = patterns_from_json(proto.at("end_patterns"));
        a.proto.token_count_mean = proto.at("token_count_mean").get<double>();
        a.proto.token_count_var = proto.at("token_count_var").get<double>();
        a.proto.sample_size = proto.at("sample_size").get<long>();
        const auto& prof = j.at("profile");
        a.profile.field = a.field;
        a.profile.patterns = patterns_from_json(prof.at("patterns"));
        a.profile.pattern_counts = prof.at("pattern_counts").get<std::vector<long>>();
        a.profile.sample_size = prof.at("sample_size").get<long>();
        const auto& numeric = prof.at("numeric");
        for (int i = 0; i < kNumericFeatureCount; ++i)
            a.profile.numeric[static_cast<size_t>(i)] =
                numeric.at(kNumericFeatureNames[static_cast<size_t>(i)]).get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("artifact field error: ") + e.what());
    }
    return a;
}

void save_artifact(const std::string& path, const FieldArtifact& a) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize_artifact(a);
    if (!out) throw std::runtime_error("write failed: " + path);
}

FieldArtifact load_artifact(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_artifact(buf.str());
}

std::vector<std::string> TupleSet::column(const std::string& field) const {
    for (size_t i = 0; i < fields.size(); ++i) {
        if (fields[i] == field) {
            std::vector<std::string> out;
            for (const auto& row : rows) out.push_back(row[i]);
            return out;
        }
    }
    throw std::runtime_error("no such field: " + field);
}

TupleSet parse_tuples(const std::string& text) {
    TupleSet ts;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        size_t start = 0;
        while (true) {
            size_t tab = line.find('\t', start);
            if (tab == std::string::npos) { cells.push_back(line.substr(start)); break; }
            cells.push_back(line.substr(start, tab - start));
            start = tab + 1;
        }
        if (ts.fields.empty()) {
            ts.fields = std::move(cells);
        } else {
            if (cells.size() != ts.fields.size())
                throw std::runtime_error("tuple row width mismatch");
            ts.rows.push_back(std::move(cells));
        }
    }
    if (ts.fields.empty()) throw std::runtime_error("empty tuple file");
    return ts;
}

std::string format_labels(const std::vector<LabeledExample>& labels) {
    std::ostringstream out;
    for (const auto& l : labels) {
        std::string escaped;
        for (char c : l.text) {
            if (c == '\\' || c == '"') { escaped += '\\'; escaped += c; }
            else if (c == '\n') { escaped += "\\n"; }
            else escaped += c;
        }
        out << "page=" << l.page_id << " field=" << l.field
            << " start=" << l.start << " end=" << l.end
            << " text=\"" << escaped << "\"\n";
    }
    return out.str();
}

}
