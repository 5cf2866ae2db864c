#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

namespace pg {

struct Token {
    std::string text;
    bool visible = true;
};

struct TokenStream {
    std::vector<Token> tokens;
    std::string source_id;
};

// Splits on whitespace; maximal letter runs and digit runs are single
// tokens, every other character is its own token. With html_aware set,
// a complete <...> region is one invisible token.
std::vector<Token> tokenize(const std::string& text, bool html_aware);

// General classes of a token text, most general first. Excludes the
// virtual root TOKEN and any specific type.
std::vector<std::string> general_classes(const std::string& text);

// Depth in the class hierarchy; TOKEN is 0. Specific types sit one
// level below their deepest general class.
int class_depth(const std::string& cls);

// True iff the class id names a magnitude or digit count subclass.
bool is_numeric_subclass(const std::string& cls);

// True iff general strictly or reflexively covers specific. Specific
// types are written "=text". Throws on an unknown general id.
bool subsumes(const std::string& general, const std::string& specific);

// True iff the token text bears the class.
bool class_matches(const std::string& cls, const std::string& token_text);

struct TypeTable {
    int min_support_k = 3;
    std::set<std::string> specific_types;
    std::map<std::string, long> bearing_counts;
    long assignment_pairs = 0;
    long number_tokens = 0;

    // Every class of the token text, general plus any admitted specific.
    std::vector<std::string> types_of(const std::string& token_text) const;

    // Fraction of all token-class assignment pairs carried by cls.
    double probability(const std::string& cls) const;

    // Probability used when proposing tree children: magnitude and digit
    // count classes are rated against the number-token population, every
    // other class keeps its global probability.
    double creation_probability(const std::string& cls) const;
};

std::vector<std::string> types_of(const std::string& token_text, const TypeTable& table);

// Builds the table from positive examples. A token text becomes a
// specific type when it appears in at least k distinct examples.
// Requires k >= 2 and at least one non-empty example.
TypeTable build_type_table(const std::vector<TokenStream>& examples, int k);

}
