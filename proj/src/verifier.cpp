#include "protoguard/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "protoguard/significance.hpp"

namespace pg {

const std::array<const char*, kNumericFeatureCount> kNumericFeatureNames = {
    "tuples_per_page",  "mean_token_count", "mean_token_length", "density_alpha",
    "density_number",   "density_htmltag",  "density_punct",
};

namespace {

std::array<double, kNumericFeatureCount> numeric_features(const std::vector<TokenStream>& examples,
                                                          double tuples_per_page) {
    std::array<double, kNumericFeatureCount> f{};
    f[0] = tuples_per_page;
    if (examples.empty()) return f;
    long total_tokens = 0;
    long total_len = 0;
    long alpha = 0, number = 0, htmltag = 0, punct = 0;
    for (const auto& e : examples) {
        total_tokens += static_cast<long>(e.tokens.size());
        for (const auto& t : e.tokens) {
            total_len += static_cast<long>(t.text.size());
            auto gens = general_classes(t.text);
            for (const auto& g : gens) {
                if (g == "ALPHA") ++alpha;
                else if (g == "NUMBER") ++number;
                else if (g == "HTMLTAG") ++htmltag;
                else if (g == "PUNCT") ++punct;
            }
        }
    }
    f[1] = static_cast<double>(total_tokens) / static_cast<double>(examples.size());
    if (total_tokens > 0) {
        f[2] = static_cast<double>(total_len) / static_cast<double>(total_tokens);
        f[3] = static_cast<double>(alpha) / static_cast<double>(total_tokens);
        f[4] = static_cast<double>(number) / static_cast<double>(total_tokens);
        f[5] = static_cast<double>(htmltag) / static_cast<double>(total_tokens);
        f[6] = static_cast<double>(punct) / static_cast<double>(total_tokens);
    }
    return f;
}

// True iff a is pointwise strictly more specific than b.
bool more_specific(const Pattern& a, const Pattern& b) {
    if (a.size() != b.size()) return false;
    bool strict = false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (!subsumes(b[i], a[i])) return false;
        if (a[i] != b[i]) strict = true;
    }
    return strict;
}

// Index of the pattern the example is assigned to, or -1. Longest match
// wins; among equal lengths the pointwise most specific, then the
// lexicographically smaller pattern.
int assign_example(const TokenStream& s, const std::vector<Pattern>& patterns) {
    std::vector<int> hits;
    for (size_t i = 0; i < patterns.size(); ++i)
        if (pattern_matches(patterns[i], s, 0)) hits.push_back(static_cast<int>(i));
    if (hits.empty()) return -1;
    size_t best_len = 0;
    for (int i : hits) best_len = std::max(best_len, patterns[static_cast<size_t>(i)].size());
    std::vector<int> top;
    for (int i : hits)
        if (patterns[static_cast<size_t>(i)].size() == best_len) top.push_back(i);
    std::sort(top.begin(), top.end(), [&](int a, int b) {
        return patterns[static_cast<size_t>(a)] < patterns[static_cast<size_t>(b)];
    });
    int best = top[0];
    for (size_t k = 1; k < top.size(); ++k)
        if (more_specific(patterns[static_cast<size_t>(top[k])], patterns[static_cast<size_t>(best)]))
            best = top[k];
    return best;
}

}  // namespace

FieldProfile profile_field(const std::string& field,
                           const std::vector<TokenStream>& examples,
                           double tuples_per_page,
                           const DataPrototype& proto) {
    if (examples.empty()) throw std::runtime_error("profile_field: no examples");
    std::vector<long> counts(proto.start_patterns.size(), 0);
    for (const auto& e : examples) {
        int idx = assign_example(e, proto.start_patterns);
        if (idx >= 0) counts[static_cast<size_t>(idx)] += 1;
    }
    FieldProfile profile;
    profile.field = field;
    for (size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0) {
            profile.patterns.push_back(proto.start_patterns[i]);
            profile.pattern_counts.push_back(counts[i]);
        }
    }
    profile.sample_size = static_cast<long>(examples.size());
    profile.numeric = numeric_features(examples, tuples_per_page);
    return profile;
}

FeatureVector featurize(const std::vector<TokenStream>& examples,
                        double tuples_per_page,
                        const FieldProfile& profile) {
    FeatureVector v;
    v.pattern_counts.assign(profile.patterns.size(), 0);
    for (const auto& e : examples) {
        int idx = assign_example(e, profile.patterns);
        if (idx >= 0) v.pattern_counts[static_cast<size_t>(idx)] += 1;
    }
    v.numeric = numeric_features(examples, tuples_per_page);
    v.sample_size = static_cast<long>(examples.size());
    return v;
}

std::pair<double, int> pearson_statistic(const FeatureVector& observed,
                                         const FieldProfile& profile) {
    int m = static_cast<int>(profile.patterns.size()) + kNumericFeatureCount;
    if (m < 2) throw std::runtime_error("pearson_statistic: fewer than two features");
    double q = 0.0;
    double n = static_cast<double>(observed.sample_size);
    double N = static_cast<double>(profile.sample_size);
    for (size_t i = 0; i < profile.patterns.size(); ++i) {
        double e = n * static_cast<double>(profile.pattern_counts[i]) / N;
        double t = static_cast<double>(observed.pattern_counts[i]);
        double d = t - e;
        q += d * d / std::max(e, 0.5);
    }
    for (int j = 0; j < kNumericFeatureCount; ++j) {
        double e = profile.numeric[static_cast<size_t>(j)];
        double t = observed.numeric[static_cast<size_t>(j)];
        double d = t - e;
        q += d * d / std::max(e, 1e-6);
    }
    return {q, m - 1};
}

Verdict verify_field(const FieldProfile& profile,
                     const std::vector<TokenStream>& test_examples,
                     double tuples_per_page,
                     double alpha) {
    if (test_examples.empty()) throw std::runtime_error("verify_field: no test examples");
    bool any_match = false;
    for (const auto& e : test_examples) {
        for (const auto& p : profile.patterns) {
            if (pattern_matches(p, e, 0)) { any_match = true; break; }
        }
        if (any_match) break;
    }
    Verdict v;
    if (!any_match) {
        v.ok = false;
        v.q = 0.0;
        v.threshold = 0.0;
        v.reason = "no_pattern_matched";
        return v;
    }
    auto obs = featurize(test_examples, tuples_per_page, profile);
    auto [q, df] = pearson_statistic(obs, profile);
    v.q = q;
    v.threshold = chi_squared_threshold(df, alpha);
    v.ok = q < v.threshold;
    v.reason = v.ok ? "none" : "statistic_exceeded";
    return v;
}

SourceVerdict verify_source(const std::vector<FieldProfile>& profiles,
                            const std::map<std::string, std::vector<TokenStream>>& tests,
                            double tuples_per_page,
                            double alpha) {
    if (tests.empty()) throw std::runtime_error("verify_source: no test fields");
    SourceVerdict sv;
    sv.ok = true;
    for (const auto& [field, examples] : tests) {
        const FieldProfile* profile = nullptr;
        for (const auto& p : profiles)
            if (p.field == field) { profile = &p; break; }
        if (profile == nullptr) throw std::runtime_error("verify_source: no profile for field " + field);
        Verdict v = verify_field(*profile, examples, tuples_per_page, alpha);
        if (!v.ok) sv.ok = false;
        sv.fields.emplace_back(field, v);
    }
    return sv;
}

}
