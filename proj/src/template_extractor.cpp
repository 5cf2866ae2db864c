#include "protoguard/template_extractor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pg {

namespace {

bool tag_shaped(const std::string& t) {
    return t.size() >= 2 && t.front() == '<' && t.back() == '>';
}

std::vector<std::string> page_keys(const TokenStream& page) {
    std::vector<std::string> keys;
    keys.reserve(page.tokens.size());
    for (const auto& t : page.tokens) keys.push_back(template_key(t));
    return keys;
}

long count_occurrences(const std::vector<std::string>& seq, const std::vector<std::string>& keys) {
    if (seq.empty() || seq.size() > keys.size()) return 0;
    long count = 0;
    for (size_t i = 0; i + seq.size() <= keys.size(); ++i) {
        if (std::equal(seq.begin(), seq.end(), keys.begin() + static_cast<long>(i))) ++count;
    }
    return count;
}

}  // namespace

std::string template_key(const Token& t) {
    if (!tag_shaped(t.text)) return t.text;
    if (t.text.size() > 1 && (t.text[1] == '!' || t.text[1] == '?')) {
        std::string key;
        for (char c : t.text)
            if (c != ' ' && c != '\t' && c != '\n' && c != '\r') key += c;
        return key;
    }
    size_t i = 1;
    std::string key = "<";
    if (i < t.text.size() && t.text[i] == '/') { key += '/'; ++i; }
    while (i < t.text.size()) {
        char c = t.text[i];
        if (c == '>' || c == '/' || c == ' ' || c == '\t' || c == '\n' || c == '\r') break;
        key += static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
        ++i;
    }
    key += '>';
    return key;
}

PageTemplate find_template(const std::vector<TokenStream>& pages) {
    if (pages.size() < 2) throw std::runtime_error("find_template: need at least two pages");
    std::vector<std::vector<std::string>> keys;
    keys.reserve(pages.size());
    for (const auto& p : pages) keys.push_back(page_keys(p));

    size_t seed = 0;
    for (size_t i = 1; i < keys.size(); ++i)
        if (keys[i].size() < keys[seed].size()) seed = i;

    long n_pages = static_cast<long>(pages.size());
    auto on_every_page = [&](const std::vector<std::string>& seq) {
        for (const auto& k : keys)
            if (count_occurrences(seq, k) == 0) return false;
        return true;
    };
    auto total_occurrences = [&](const std::vector<std::string>& seq) {
        long total = 0;
        for (const auto& k : keys) total += count_occurrences(seq, k);
        return total;
    };

    PageTemplate tpl;
    tpl.page_count = n_pages;
    std::vector<std::string> run;
    auto flush = [&]() {
        if (run.size() >= 3 && total_occurrences(run) == n_pages) tpl.sequences.push_back(run);
        run.clear();
    };
    for (const auto& key : keys[seed]) {
        std::vector<std::string> grown = run;
        grown.push_back(key);
        if (on_every_page(grown)) {
            run = std::move(grown);
        } else {
            flush();
        }
    }
    flush();
    return tpl;
}

SlotMap map_slots(const TokenStream& page, const PageTemplate& tpl) {
    auto keys = page_keys(page);
    SlotMap m;
    m.page_length = keys.size();
    size_t prev_end = 0;
    for (const auto& seq : tpl.sequences) {
        std::vector<size_t> starts;
        for (size_t i = 0; i + seq.size() <= keys.size(); ++i)
            if (std::equal(seq.begin(), seq.end(), keys.begin() + static_cast<long>(i)))
                starts.push_back(i);
        if (starts.empty()) throw std::runtime_error("map_slots: template sequence missing from page");
        if (starts.size() > 1) throw std::runtime_error("map_slots: template sequence repeated on page");
        size_t start = starts[0];
        if (!m.anchors.empty() && start < prev_end)
            throw std::runtime_error("map_slots: template sequences out of order");
        m.anchors.emplace_back(start, start + seq.size());
        prev_end = start + seq.size();
    }
    return m;
}

int slot_of(const SlotMap& m, size_t pos) {
    int slot = 0;
    for (const auto& [start, end] : m.anchors) {
        if (end <= pos) ++slot;
        else break;
    }
    return slot;
}

std::string serialize_template(const PageTemplate& tpl) {
    std::ostringstream out;
    out << tpl.page_count << ' ' << tpl.sequences.size() << '\n';
    for (const auto& seq : tpl.sequences) {
        for (size_t i = 0; i < seq.size(); ++i) {
            if (i) out << ' ';
            out << seq[i];
        }
        out << '\n';
    }
    return out.str();
}

PageTemplate deserialize_template(const std::string& text) {
    std::istringstream in(text);
    PageTemplate tpl;
    size_t count = 0;
    if (!(in >> tpl.page_count >> count)) throw std::runtime_error("deserialize_template: bad header");
    std::string line;
    std::getline(in, line);
    for (size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw std::runtime_error("deserialize_template: truncated");
        std::istringstream ls(line);
        std::vector<std::string> seq;
        std::string tok;
        while (ls >> tok) seq.push_back(tok);
        if (seq.empty()) throw std::runtime_error("deserialize_template: empty sequence");
        tpl.sequences.push_back(std::move(seq));
    }
    return tpl;
}

}
