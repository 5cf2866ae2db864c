#include "protoguard/token_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace pg {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }
// Bytes outside ASCII count as letters.
bool is_letter(unsigned char c) { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c >= 0x80; }
bool is_upper(unsigned char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(unsigned char c) { return c >= 'a' && c <= 'z'; }

bool tag_shaped(const std::string& t) {
    return t.size() >= 2 && t.front() == '<' && t.back() == '>';
}

const std::map<std::string, std::string> kParent = {
    {"ALPHANUM", "TOKEN"}, {"PUNCT", "TOKEN"},  {"HTMLTAG", "TOKEN"},
    {"ALPHA", "ALPHANUM"}, {"NUMBER", "ALPHANUM"},
    {"UPPER", "ALPHA"},    {"LOWER", "ALPHA"},
    {"ALLCAPS", "UPPER"},
    {"SMALL", "NUMBER"},   {"MEDIUM", "NUMBER"}, {"LARGE", "NUMBER"},
    {"1DIGIT", "NUMBER"},  {"2DIGIT", "NUMBER"}, {"3DIGIT", "NUMBER"},
};

}  // namespace

std::vector<Token> tokenize(const std::string& text, bool html_aware) {
    std::vector<Token> out;
    size_t i = 0;
    size_t n = text.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space(c)) { ++i; continue; }
        if (html_aware && c == '<') {
            size_t close = text.find('>', i + 1);
            if (close != std::string::npos) {
                out.push_back({text.substr(i, close - i + 1), false});
                i = close + 1;
                continue;
            }
            out.push_back({"<", true});
            ++i;
            continue;
        }
        if (is_letter(c)) {
            size_t j = i;
            while (j < n && is_letter(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({text.substr(i, j - i), true});
            i = j;
            continue;
        }
        if (is_digit(c)) {
            size_t j = i;
            while (j < n && is_digit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({text.substr(i, j - i), true});
            i = j;
            continue;
        }
        out.push_back({std::string(1, text[i]), true});
        ++i;
    }
    return out;
}

std::vector<std::string> general_classes(const std::string& text) {
    if (text.empty()) return {};
    if (tag_shaped(text)) return {"HTMLTAG"};
    bool all_digit = std::all_of(text.begin(), text.end(), [](char c) { return is_digit(static_cast<unsigned char>(c)); });
    if (all_digit) {
        std::vector<std::string> out = {"ALPHANUM", "NUMBER"};
        size_t first = text.find_first_not_of('0');
        std::string stripped = first == std::string::npos ? "0" : text.substr(first);
        if (stripped.size() > 18) {
            out.push_back("LARGE");
        } else {
            unsigned long long v = std::stoull(stripped);
            if (v < 10) out.push_back("SMALL");
            else if (v <= 1000) out.push_back("MEDIUM");
            else out.push_back("LARGE");
        }
        if (text.size() == 1) out.push_back("1DIGIT");
        else if (text.size() == 2) out.push_back("2DIGIT");
        else if (text.size() == 3) out.push_back("3DIGIT");
        return out;
    }
    bool all_letter = std::all_of(text.begin(), text.end(), [](char c) { return is_letter(static_cast<unsigned char>(c)); });
    if (all_letter) {
        std::vector<std::string> out = {"ALPHANUM", "ALPHA"};
        if (is_upper(static_cast<unsigned char>(text[0]))) {
            out.push_back("UPPER");
            if (std::all_of(text.begin(), text.end(), [](char c) { return is_upper(static_cast<unsigned char>(c)); }))
                out.push_back("ALLCAPS");
        } else if (std::all_of(text.begin(), text.end(), [](char c) { return is_lower(static_cast<unsigned char>(c)); })) {
            out.push_back("LOWER");
        }
        return out;
    }
    if (text.size() == 1) return {"PUNCT"};
    return {"ALPHANUM"};
}

int class_depth(const std::string& cls) {
    if (cls == "TOKEN") return 0;
    if (!cls.empty() && cls[0] == '=') {
        auto gens = general_classes(cls.substr(1));
        int best = 0;
        for (const auto& g : gens) best = std::max(best, class_depth(g));
        return best + 1;
    }
    auto it = kParent.find(cls);
    if (it == kParent.end()) throw std::runtime_error("unknown class id: " + cls);
    return 1 + class_depth(it->second);
}

bool is_numeric_subclass(const std::string& cls) {
    return cls == "SMALL" || cls == "MEDIUM" || cls == "LARGE" ||
           cls == "1DIGIT" || cls == "2DIGIT" || cls == "3DIGIT";
}

bool subsumes(const std::string& general, const std::string& specific) {
    auto known = [](const std::string& id) {
        if (!id.empty() && id[0] == '=') return true;
        return id == "TOKEN" || kParent.count(id) > 0;
    };
    if (!known(general)) throw std::runtime_error("unknown class id: " + general);
    if (!known(specific)) throw std::runtime_error("unknown class id: " + specific);
    if (general == specific) return true;
    if (!general.empty() && general[0] == '=') return false;
    if (general == "TOKEN") return true;
    if (!specific.empty() && specific[0] == '=') {
        auto gens = general_classes(specific.substr(1));
        return std::find(gens.begin(), gens.end(), general) != gens.end();
    }
    std::string cur = specific;
    while (cur != "TOKEN") {
        cur = kParent.at(cur);
        if (cur == general) return true;
    }
    return false;
}

bool class_matches(const std::string& cls, const std::string& token_text) {
    if (cls == "TOKEN") return true;
    if (!cls.empty() && cls[0] == '=') return cls.compare(1, std::string::npos, token_text) == 0;
    auto gens = general_classes(token_text);
    return std::find(gens.begin(), gens.end(), cls) != gens.end();
}

std::vector<std::string> TypeTable::types_of(const std::string& token_text) const {
    auto out = general_classes(token_text);
    if (specific_types.count(token_text)) out.push_back("=" + token_text);
    return out;
}

double TypeTable::probability(const std::string& cls) const {
    auto it = bearing_counts.find(cls);
    if (it == bearing_counts.end() || assignment_pairs == 0) return 0.0;
    return static_cast<double>(it->second) / static_cast<double>(assignment_pairs);
}

double TypeTable::creation_probability(const std::string& cls) const {
    if (is_numeric_subclass(cls)) {
        auto it = bearing_counts.find(cls);
        if (it == bearing_counts.end() || number_tokens == 0) return 0.0;
        return static_cast<double>(it->second) / static_cast<double>(number_tokens);
    }
    return probability(cls);
}

std::vector<std::string> types_of(const std::string& token_text, const TypeTable& table) {
    return table.types_of(token_text);
}

TypeTable build_type_table(const std::vector<TokenStream>& examples, int k) {
    if (k < 2) throw std::runtime_error("build_type_table: k must be at least 2");
    bool any = false;
    for (const auto& e : examples)
        if (!e.tokens.empty()) any = true;
    if (!any) throw std::runtime_error("build_type_table: no non-empty examples");

    std::map<std::string, std::set<size_t>> support;
    for (size_t i = 0; i < examples.size(); ++i)
        for (const auto& t : examples[i].tokens) support[t.text].insert(i);

    TypeTable table;
    table.min_support_k = k;
    for (const auto& [text, owners] : support)
        if (static_cast<int>(owners.size()) >= k) table.specific_types.insert(text);

    for (const auto& e : examples) {
        for (const auto& t : e.tokens) {
            auto classes = table.types_of(t.text);
            for (const auto& c : classes) table.bearing_counts[c] += 1;
            table.assignment_pairs += static_cast<long>(classes.size());
        }
    }
    auto it = table.bearing_counts.find("NUMBER");
    table.number_tokens = it == table.bearing_counts.end() ? 0 : it->second;
    return table;
}

}
