#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "protoguard/prototype_learner.hpp"
#include "protoguard/token_model.hpp"

namespace testutil {

inline std::string fixture_path(const std::string& name) {
    return std::string(PG_FIXTURES_DIR) + "/" + name;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::vector<std::string> read_lines(const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

inline std::vector<pg::TokenStream> streams_from_lines(const std::vector<std::string>& lines,
                                                       bool html_aware = false) {
    std::vector<pg::TokenStream> out;
    for (size_t i = 0; i < lines.size(); ++i) {
        pg::TokenStream s;
        s.source_id = std::to_string(i);
        s.tokens = pg::tokenize(lines[i], html_aware);
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<pg::TokenStream> load_column(const std::string& fixture) {
    return streams_from_lines(read_lines(fixture_path(fixture)));
}

inline std::vector<std::string> shown(const std::vector<pg::Pattern>& patterns) {
    std::vector<std::string> out;
    for (const auto& p : patterns) out.push_back(pg::pattern_to_string(p));
    return out;
}

}  // namespace testutil
