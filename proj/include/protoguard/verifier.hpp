#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "protoguard/prototype_learner.hpp"

namespace pg {

inline constexpr int kNumericFeatureCount = 7;
extern const std::array<const char*, kNumericFeatureCount> kNumericFeatureNames;

struct FieldProfile {
    std::string field;
    std::vector<Pattern> patterns;
    std::vector<long> pattern_counts;
    long sample_size = 0;
    std::array<double, kNumericFeatureCount> numeric{};
};

// Assigns each example to its best-matching full pattern: longest match
// wins, ties go to the pointwise most specific, then the lexicographically
// smaller pattern. Patterns that cover no example are dropped.
FieldProfile profile_field(const std::string& field,
                           const std::vector<TokenStream>& examples,
                           double tuples_per_page,
                           const DataPrototype& proto);

struct FeatureVector {
    std::vector<long> pattern_counts;
    std::array<double, kNumericFeatureCount> numeric{};
    long sample_size = 0;
};

FeatureVector featurize(const std::vector<TokenStream>& examples,
                        double tuples_per_page,
                        const FieldProfile& profile);

// Pearson statistic of the observation against expectations scaled from
// the profile, and the degrees of freedom m - 1. Throws if m < 2.
std::pair<double, int> pearson_statistic(const FeatureVector& observed,
                                         const FieldProfile& profile);

struct Verdict {
    bool ok = false;
    double q = 0.0;
    double threshold = 0.0;
    std::string reason;  // none, no_pattern_matched, statistic_exceeded
};

Verdict verify_field(const FieldProfile& profile,
                     const std::vector<TokenStream>& test_examples,
                     double tuples_per_page,
                     double alpha);

struct SourceVerdict {
    bool ok = false;
    std::vector<std::pair<std::string, Verdict>> fields;
};

// OK iff every field verifies. Throws on zero fields or a test field
// without a profile.
SourceVerdict verify_source(const std::vector<FieldProfile>& profiles,
                            const std::map<std::string, std::vector<TokenStream>>& tests,
                            double tuples_per_page,
                            double alpha);

}
