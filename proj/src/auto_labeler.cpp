#include "protoguard/auto_labeler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "protoguard/significance.hpp"

namespace pg {

namespace {

std::vector<std::string> token_texts(const std::string& text, bool html_aware) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(text, html_aware)) out.push_back(t.text);
    return out;
}

bool any_prefix_match(const std::vector<Pattern>& patterns, const TokenStream& page,
                      size_t start, size_t len) {
    for (const auto& p : patterns)
        if (p.size() <= len && pattern_matches(p, page, start)) return true;
    return false;
}

bool any_suffix_match(const std::vector<Pattern>& patterns, const TokenStream& page,
                      size_t start, size_t len) {
    for (const auto& p : patterns)
        if (p.size() <= len && pattern_matches(p, page, start + len - p.size())) return true;
    return false;
}

}  // namespace

std::vector<CandidateExtract> enumerate_candidates(const std::string& page_id,
                                                   const TokenStream& page,
                                                   const SlotMap& slots,
                                                   const DataPrototype& proto) {
    std::vector<CandidateExtract> out;
    if (proto.start_patterns.empty() || proto.end_patterns.empty()) return out;

    double mean = proto.token_count_mean;
    double band = std::max(2.0, 3.0 * std::sqrt(proto.token_count_var));
    double cap = std::min(2.0 * mean + 3.0, 50.0);

    std::vector<std::pair<size_t, size_t>> gaps;
    size_t prev = 0;
    for (const auto& [start, end] : slots.anchors) {
        gaps.emplace_back(prev, start);
        prev = end;
    }
    gaps.emplace_back(prev, slots.page_length);

    for (const auto& [gap_start, gap_end] : gaps) {
        for (size_t start = gap_start; start < gap_end; ++start) {
            for (size_t stop = start + 1; stop <= gap_end; ++stop) {
                size_t len = stop - start;
                if (static_cast<double>(len) > cap) break;
                if (std::fabs(static_cast<double>(len) - mean) > band) continue;
                if (!any_prefix_match(proto.start_patterns, page, start, len)) continue;
                if (!any_suffix_match(proto.end_patterns, page, start, len)) continue;
                CandidateExtract c;
                c.page_id = page_id;
                c.start = start;
                c.end = stop;
                c.slot = slot_of(slots, start);
                bool visible = true;
                std::string text;
                for (size_t i = start; i < stop; ++i) {
                    if (i > start) text += ' ';
                    text += page.tokens[i].text;
                    if (!page.tokens[i].visible) visible = false;
                }
                c.text = text;
                c.visible = visible;
                c.prev_key = start == 0 ? "^BOF^" : template_key(page.tokens[start - 1]);
                c.next_key = stop == slots.page_length ? "^EOF^" : template_key(page.tokens[stop]);
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

std::vector<CandidateGroup> featurize_and_group(const std::vector<CandidateExtract>& candidates) {
    std::map<GroupKey, std::vector<CandidateExtract>> buckets;
    for (const auto& c : candidates)
        buckets[{c.slot, c.prev_key, c.next_key, c.visible}].push_back(c);
    std::vector<CandidateGroup> out;
    for (auto& [key, members] : buckets) {
        CandidateGroup g;
        g.key = key;
        g.members = std::move(members);
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<CandidateGroup> score_groups(std::vector<CandidateGroup> groups,
                                         const std::vector<std::string>& old_values,
                                         const FieldProfile& profile,
                                         long page_count) {
    std::set<std::vector<std::string>> old_seqs;
    for (const auto& v : old_values) {
        auto texts = token_texts(v, false);
        if (!texts.empty()) old_seqs.insert(std::move(texts));
    }
    bool any_overlap = false;
    for (auto& g : groups) {
        g.overlap = 0;
        for (const auto& m : g.members)
            if (old_seqs.count(token_texts(m.text, true))) g.overlap += 1;
        if (g.overlap > 0) any_overlap = true;
    }
    if (!any_overlap && page_count > 0) {
        for (auto& g : groups) {
            std::vector<TokenStream> streams;
            for (const auto& m : g.members) {
                TokenStream s;
                s.source_id = m.page_id;
                s.tokens = tokenize(m.text, true);
                streams.push_back(std::move(s));
            }
            double tpp = static_cast<double>(g.members.size()) / static_cast<double>(page_count);
            bool any_match = false;
            for (const auto& s : streams) {
                for (const auto& p : profile.patterns)
                    if (pattern_matches(p, s, 0)) { any_match = true; break; }
                if (any_match) break;
            }
            if (!any_match || streams.empty()) {
                g.q = std::numeric_limits<double>::infinity();
            } else {
                auto obs = featurize(streams, tpp, profile);
                g.q = pearson_statistic(obs, profile).first;
            }
        }
    }
    std::sort(groups.begin(), groups.end(), [](const CandidateGroup& a, const CandidateGroup& b) {
        if (a.overlap != b.overlap) return a.overlap > b.overlap;
        if (a.q != b.q) return a.q < b.q;
        return a.key < b.key;
    });
    return groups;
}

LabelResult label_pages(const std::vector<std::pair<std::string, TokenStream>>& pages,
                        const PageTemplate& tpl,
                        const std::map<std::string, FieldModel>& fields) {
    std::vector<SlotMap> slot_maps;
    slot_maps.reserve(pages.size());
    for (const auto& [id, page] : pages) slot_maps.push_back(map_slots(page, tpl));

    LabelResult result;
    for (const auto& [field, model] : fields) {
        std::vector<CandidateExtract> candidates;
        for (size_t i = 0; i < pages.size(); ++i) {
            auto page_cands = enumerate_candidates(pages[i].first, pages[i].second,
                                                   slot_maps[i], model.proto);
            candidates.insert(candidates.end(), page_cands.begin(), page_cands.end());
        }
        auto scored = score_groups(featurize_and_group(candidates), model.old_values,
                                   model.profile, static_cast<long>(pages.size()));
        FieldCoverage cov;
        cov.field = field;
        cov.pages_total = static_cast<long>(pages.size());
        if (!scored.empty()) {
            const CandidateGroup& winner = scored.front();
            for (const auto& [id, page] : pages) {
                const CandidateExtract* best = nullptr;
                for (const auto& m : winner.members) {
                    if (m.page_id != id) continue;
                    if (best == nullptr || m.start < best->start ||
                        (m.start == best->start && m.end < best->end))
                        best = &m;
                }
                if (best != nullptr) {
                    result.labels.push_back({id, field, best->start, best->end, best->text});
                    cov.pages_labeled += 1;
                }
            }
        }
        cov.status = cov.pages_labeled >= 2 ? "induction-ready"
                   : cov.pages_labeled == 1 ? "below-threshold"
                                            : "unlabeled";
        result.coverage.push_back(std::move(cov));
    }
    return result;
}

}
