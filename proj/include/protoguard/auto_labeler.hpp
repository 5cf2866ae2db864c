#pragma once

#include <map>
#include <string>
#include <vector>

#include "protoguard/template_extractor.hpp"
#include "protoguard/verifier.hpp"

namespace pg {

struct CandidateExtract {
    std::string page_id;
    size_t start = 0;  // token span [start, end)
    size_t end = 0;
    std::string text;
    int slot = 0;
    std::string prev_key;  // "^BOF^" / "^EOF^" at page edges
    std::string next_key;
    bool visible = true;
};

struct GroupKey {
    int slot = 0;
    std::string prev_key;
    std::string next_key;
    bool visible = true;
    auto operator<=>(const GroupKey&) const = default;
};

struct CandidateGroup {
    GroupKey key;
    std::vector<CandidateExtract> members;
    long overlap = 0;   // members equal to some old value
    double q = 0.0;     // fallback score, lower is better
};

struct LabeledExample {
    std::string page_id;
    std::string field;
    size_t start = 0;
    size_t end = 0;
    std::string text;
};

struct FieldCoverage {
    std::string field;
    long pages_labeled = 0;
    long pages_total = 0;
    std::string status;  // induction-ready, below-threshold, unlabeled
};

struct LabelResult {
    std::vector<LabeledExample> labels;
    std::vector<FieldCoverage> coverage;
};

// Spans strictly inside template gaps whose prefix matches a start
// pattern, suffix matches an end pattern, and whose length passes the
// prototype's token-count filter.
std::vector<CandidateExtract> enumerate_candidates(const std::string& page_id,
                                                   const TokenStream& page,
                                                   const SlotMap& slots,
                                                   const DataPrototype& proto);

// Partitions candidates by (slot, context keys, visibility).
std::vector<CandidateGroup> featurize_and_group(const std::vector<CandidateExtract>& candidates);

// Scores each group by overlap with the old values; when every group
// scores zero, falls back to the Pearson statistic against the profile.
// Returns groups ranked best first.
std::vector<CandidateGroup> score_groups(std::vector<CandidateGroup> groups,
                                         const std::vector<std::string>& old_values,
                                         const FieldProfile& profile,
                                         long page_count);

struct FieldModel {
    DataPrototype proto;
    FieldProfile profile;
    std::vector<std::string> old_values;
};

// Labels each page with at most one span per field, taken from the
// winning group (earliest span on a page wins). A field is
// induction-ready when labeled on at least two pages.
LabelResult label_pages(const std::vector<std::pair<std::string, TokenStream>>& pages,
                        const PageTemplate& tpl,
                        const std::map<std::string, FieldModel>& fields);

}
