#pragma once

#include <string>
#include <vector>

#include "protoguard/token_model.hpp"

namespace pg {

// A pattern is a sequence of class ids; "=text" entries are specifics.
using Pattern = std::vector<std::string>;

std::string pattern_to_string(const Pattern& p);

struct PatternNode {
    std::string cls;
    std::vector<int> examples;
    std::vector<PatternNode> children;
};

struct PatternTree {
    PatternNode root;
    bool ending = false;
};

// Token texts per example; ending trees receive reversed sequences.
using TokenSeq = std::vector<std::string>;

// Proposes one child per class significantly over-represented among the
// tokens that follow this node's examples at the given depth.
std::vector<PatternNode> create_children(const PatternNode& node,
                                         const std::vector<TokenSeq>& seqs,
                                         size_t depth,
                                         const TypeTable& table,
                                         double alpha);

// Tournament along class-hierarchy edges: of two candidates whose classes
// are adjacent in the hierarchy restricted to the candidate set, the one
// with the weaker tail loses. Survivors lose no comparison.
std::vector<PatternNode> prune_children(std::vector<PatternNode> children,
                                        long node_count,
                                        const TypeTable& table);

PatternTree grow_pattern_tree(const std::vector<TokenSeq>& seqs,
                              const TypeTable& table,
                              double alpha,
                              int max_len,
                              bool ending);

// All root-to-node paths of the pruned tree, in tree order.
std::vector<Pattern> tree_paths(const PatternTree& tree);

// Keeps a path iff its node count net of child coverage is significant
// against the parent population; leaves are always kept.
std::vector<Pattern> extract_patterns(const PatternTree& tree,
                                      const TypeTable& table,
                                      double alpha);

std::vector<Pattern> learn_patterns(const std::vector<TokenStream>& examples,
                                    const TypeTable& table,
                                    double alpha,
                                    int max_len);

// True iff the pattern matches the stream's tokens starting at `at`.
bool pattern_matches(const Pattern& p, const TokenStream& s, size_t at);

// True iff the pattern matches the final |p| tokens of the stream.
bool pattern_matches_end(const Pattern& p, const TokenStream& s);

struct DataPrototype {
    std::string field;
    std::vector<Pattern> start_patterns;
    std::vector<Pattern> end_patterns;
    double token_count_mean = 0.0;
    double token_count_var = 0.0;
    long sample_size = 0;
};

// Learns both directions plus token-count statistics. Ending patterns
// are learned on reversed sequences at depth 1 and stored un-reversed.
// Throws with fewer than two examples.
DataPrototype learn_prototype(const std::string& field,
                              const std::vector<TokenStream>& examples,
                              const TypeTable& table,
                              double alpha,
                              int max_len);

}
