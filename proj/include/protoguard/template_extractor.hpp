#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "protoguard/token_model.hpp"

namespace pg {

// Comparison key for template matching: tags collapse to a lowercase
// name with attributes stripped, comments and doctypes lose whitespace,
// everything else is the raw text.
std::string template_key(const Token& t);

struct PageTemplate {
    std::vector<std::vector<std::string>> sequences;  // token keys
    long page_count = 0;
};

// Grows candidate sequences over the shortest page and keeps each run
// that appears on every page with total occurrence count equal to the
// page count and length at least three.
PageTemplate find_template(const std::vector<TokenStream>& pages);

struct SlotMap {
    // Half-open [start, end) spans of the template sequences on one page,
    // strictly increasing.
    std::vector<std::pair<size_t, size_t>> anchors;
    size_t page_length = 0;
};

// Locates every template sequence on the page. Throws if a sequence is
// missing, appears more than once, or the spans are out of order.
SlotMap map_slots(const TokenStream& page, const PageTemplate& tpl);

// Slot index of a token position: the number of anchors ending at or
// before it. Gap i sits between anchors i-1 and i.
int slot_of(const SlotMap& m, size_t pos);

std::string serialize_template(const PageTemplate& tpl);
PageTemplate deserialize_template(const std::string& text);

}
