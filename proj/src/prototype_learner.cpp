#include "protoguard/prototype_learner.hpp"

#include <algorithm>
#include <stdexcept>
#include <tuple>

#include "protoguard/significance.hpp"

namespace pg {

namespace {

// Strict coverage used by the prune tournament. Specific types cover
// nothing, not even themselves.
bool covers_strictly(const std::string& g, const std::string& s) {
    if (g == s) return false;
    if (!g.empty() && g[0] == '=') return false;
    if (!s.empty() && s[0] == '=') {
        auto gens = general_classes(s.substr(1));
        return std::find(gens.begin(), gens.end(), g) != gens.end();
    }
    return subsumes(g, s) && g != "TOKEN";
}

std::vector<std::string> collect_texts(const TokenStream& s) {
    std::vector<std::string> out;
    out.reserve(s.tokens.size());
    for (const auto& t : s.tokens) out.push_back(t.text);
    return out;
}

void grow_node(PatternNode& node, const std::vector<TokenSeq>& seqs, size_t depth,
               const TypeTable& table, double alpha, int max_len) {
    if (static_cast<int>(depth) >= max_len) return;
    auto kids = create_children(node, seqs, depth, table, alpha);
    node.children = prune_children(std::move(kids), static_cast<long>(node.examples.size()), table);
    for (auto& child : node.children) grow_node(child, seqs, depth + 1, table, alpha, max_len);
}

void collect_paths(const PatternNode& node, Pattern& prefix, std::vector<Pattern>& out) {
    for (const auto& child : node.children) {
        prefix.push_back(child.cls);
        out.push_back(prefix);
        collect_paths(child, prefix, out);
        prefix.pop_back();
    }
}

void extract_node(const PatternNode& node, const PatternNode* parent, Pattern& prefix,
                  const TypeTable& table, double alpha, std::vector<Pattern>& out) {
    if (parent != nullptr) {
        long covered = 0;
        for (const auto& c : node.children) covered += static_cast<long>(c.examples.size());
        long net = static_cast<long>(node.examples.size()) - covered;
        if (net < 0) net = 0;
        bool keep = node.children.empty() ||
                    pattern_significant(net, static_cast<long>(parent->examples.size()),
                                        table.probability(node.cls), alpha);
        if (keep) out.push_back(prefix);
    }
    for (const auto& child : node.children) {
        prefix.push_back(child.cls);
        extract_node(child, &node, prefix, table, alpha, out);
        prefix.pop_back();
    }
}

}  // namespace

std::string pattern_to_string(const Pattern& p) {
    std::string out = "<";
    for (size_t i = 0; i < p.size(); ++i) {
        if (i) out += ' ';
        out += (!p[i].empty() && p[i][0] == '=') ? p[i].substr(1) : p[i];
    }
    out += '>';
    return out;
}

std::vector<PatternNode> create_children(const PatternNode& node,
                                         const std::vector<TokenSeq>& seqs,
                                         size_t depth,
                                         const TypeTable& table,
                                         double alpha) {
    std::map<std::string, std::vector<int>> followers;
    for (int idx : node.examples) {
        const auto& seq = seqs[static_cast<size_t>(idx)];
        if (seq.size() <= depth) continue;
        for (const auto& cls : table.types_of(seq[depth])) followers[cls].push_back(idx);
    }
    std::vector<PatternNode> kids;
    for (const auto& [cls, idxs] : followers) {
        double p = table.creation_probability(cls);
        if (pattern_significant(static_cast<long>(idxs.size()),
                                static_cast<long>(node.examples.size()), p, alpha)) {
            kids.push_back({cls, idxs, {}});
        }
    }
    return kids;
}

std::vector<PatternNode> prune_children(std::vector<PatternNode> children,
                                        long node_count,
                                        const TypeTable& table) {
    size_t n = children.size();
    if (n <= 1) return children;

    std::vector<double> score(n);
    for (size_t i = 0; i < n; ++i)
        score[i] = significance_tail(static_cast<long>(children[i].examples.size()) - 1,
                                     node_count, table.probability(children[i].cls));

    // Adjacency within the candidate set: a covers b with no candidate
    // strictly between them.
    auto adjacent = [&](size_t a, size_t b) {
        if (!covers_strictly(children[a].cls, children[b].cls)) return false;
        for (size_t c = 0; c < n; ++c) {
            if (c == a || c == b) continue;
            if (covers_strictly(children[a].cls, children[c].cls) &&
                covers_strictly(children[c].cls, children[b].cls))
                return false;
        }
        return true;
    };

    std::vector<bool> lost(n, false);
    for (size_t a = 0; a < n; ++a) {
        for (size_t b = a + 1; b < n; ++b) {
            if (!adjacent(a, b) && !adjacent(b, a)) continue;
            auto ka = std::make_tuple(score[a], -class_depth(children[a].cls), children[a].cls);
            auto kb = std::make_tuple(score[b], -class_depth(children[b].cls), children[b].cls);
            if (ka > kb) lost[a] = true; else lost[b] = true;
        }
    }
    std::vector<PatternNode> out;
    for (size_t i = 0; i < n; ++i)
        if (!lost[i]) out.push_back(std::move(children[i]));
    return out;
}

PatternTree grow_pattern_tree(const std::vector<TokenSeq>& seqs,
                              const TypeTable& table,
                              double alpha,
                              int max_len,
                              bool ending) {
    if (max_len < 1) throw std::runtime_error("grow_pattern_tree: max_len < 1");
    PatternTree tree;
    tree.ending = ending;
    for (size_t i = 0; i < seqs.size(); ++i) tree.root.examples.push_back(static_cast<int>(i));
    grow_node(tree.root, seqs, 0, table, alpha, max_len);
    return tree;
}

std::vector<Pattern> tree_paths(const PatternTree& tree) {
    std::vector<Pattern> out;
    Pattern prefix;
    collect_paths(tree.root, prefix, out);
    return out;
}

std::vector<Pattern> extract_patterns(const PatternTree& tree,
                                      const TypeTable& table,
                                      double alpha) {
    std::vector<Pattern> out;
    Pattern prefix;
    extract_node(tree.root, nullptr, prefix, table, alpha, out);
    return out;
}

std::vector<Pattern> learn_patterns(const std::vector<TokenStream>& examples,
                                    const TypeTable& table,
                                    double alpha,
                                    int max_len) {
    std::vector<TokenSeq> seqs;
    seqs.reserve(examples.size());
    for (const auto& e : examples) seqs.push_back(collect_texts(e));
    return tree_paths(grow_pattern_tree(seqs, table, alpha, max_len, false));
}

bool pattern_matches(const Pattern& p, const TokenStream& s, size_t at) {
    if (at + p.size() > s.tokens.size()) return false;
    for (size_t i = 0; i < p.size(); ++i)
        if (!class_matches(p[i], s.tokens[at + i].text)) return false;
    return true;
}

bool pattern_matches_end(const Pattern& p, const TokenStream& s) {
    if (p.size() > s.tokens.size()) return false;
    return pattern_matches(p, s, s.tokens.size() - p.size());
}

DataPrototype learn_prototype(const std::string& field,
                              const std::vector<TokenStream>& examples,
                              const TypeTable& table,
                              double alpha,
                              int max_len) {
    if (examples.size() < 2) throw std::runtime_error("learn_prototype: need at least two examples");
    std::vector<TokenSeq> seqs;
    std::vector<TokenSeq> rev;
    for (const auto& e : examples) {
        auto texts = collect_texts(e);
        rev.push_back({texts.rbegin(), texts.rend()});
        seqs.push_back(std::move(texts));
    }
    DataPrototype proto;
    proto.field = field;
    proto.start_patterns = tree_paths(grow_pattern_tree(seqs, table, alpha, max_len, false));
    auto end_paths = tree_paths(grow_pattern_tree(rev, table, alpha, 1, true));
    for (auto& p : end_paths) {
        std::reverse(p.begin(), p.end());
        proto.end_patterns.push_back(std::move(p));
    }
    double sum = 0.0;
    for (const auto& s : seqs) sum += static_cast<double>(s.size());
    double mean = sum / static_cast<double>(seqs.size());
    double ss = 0.0;
    for (const auto& s : seqs) {
        double d = static_cast<double>(s.size()) - mean;
        ss += d * d;
    }
    proto.token_count_mean = mean;
    proto.token_count_var = ss / static_cast<double>(seqs.size());
    proto.sample_size = static_cast<long>(seqs.size());
    return proto;
}

}
