#pragma once

#include <string>
#include <vector>

#include "protoguard/auto_labeler.hpp"

namespace pg {

inline constexpr int kFormatVersion = 1;

struct FieldArtifact {
    std::string field;
    DataPrototype proto;
    FieldProfile profile;
    double learn_alpha = 0.05;
    int min_support_k = 3;
    int max_pattern_length = 6;
    double tuples_per_page = 1.0;
};

std::string serialize_artifact(const FieldArtifact& a);
FieldArtifact deserialize_artifact(const std::string& text);

void save_artifact(const std::string& path, const FieldArtifact& a);
FieldArtifact load_artifact(const std::string& path);

// TSV with a header row of field names; one tuple per row.
struct TupleSet {
    std::vector<std::string> fields;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> column(const std::string& field) const;
};

TupleSet parse_tuples(const std::string& text);

std::string format_labels(const std::vector<LabeledExample>& labels);

}
