#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>

#include "protoguard/auto_labeler.hpp"
#include "test_util.hpp"

using testutil::fixture_path;
using testutil::read_file;
using testutil::read_lines;

namespace {

pg::TokenStream load_page(const std::string& fixture) {
    pg::TokenStream s;
    s.tokens = pg::tokenize(read_file(fixture_path(fixture)), true);
    s.source_id = fixture;
    return s;
}

pg::FieldModel make_model(const std::string& fixture) {
    auto examples = testutil::load_column(fixture);
    auto table = pg::build_type_table(examples, 3);
    pg::FieldModel m;
    m.proto = pg::learn_prototype(fixture, examples, table, 0.05, 6);
    m.profile = pg::profile_field(fixture, examples, 1.0, m.proto);
    m.old_values = read_lines(fixture_path(fixture));
    return m;
}

using LabelTuple = std::tuple<std::string, std::string, size_t, size_t, std::string>;

std::set<LabelTuple> label_set(const pg::LabelResult& r) {
    std::set<LabelTuple> out;
    for (const auto& l : r.labels)
        out.insert({l.page_id, l.field, l.start, l.end, l.text});
    return out;
}

}  // namespace

TEST_CASE("phone candidates collapse to the full span") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});
    auto slots = pg::map_slots(a, tpl);
    auto model = make_model("bigbook_phones.txt");

    auto cands = pg::enumerate_candidates("a", a, slots, model.proto);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].start == 46);
    CHECK(cands[0].end == 52);
    CHECK(cands[0].text == "( 626 ) 793 - 8123");
    CHECK(cands[0].slot == 1);
    CHECK(cands[0].prev_key == "<br>");
    CHECK(cands[0].next_key == "<br>");
    CHECK(cands[0].visible);
}

TEST_CASE("candidates stay strictly inside the template gaps") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});
    auto slots = pg::map_slots(a, tpl);
    auto model = make_model("bigbook_names.txt");

    auto cands = pg::enumerate_candidates("a", a, slots, model.proto);
    CHECK(!cands.empty());
    for (const auto& c : cands) {
        bool in_gap1 = c.start >= 32 && c.end <= 52;
        bool in_gap2 = c.start >= 71 && c.end <= 73;
        CHECK((in_gap1 || in_gap2));
    }
}

TEST_CASE("candidate spans respect the length band and visibility") {
    pg::DataPrototype proto;
    proto.field = "t";
    proto.start_patterns = {{"NUMBER"}};
    proto.end_patterns = {{"NUMBER"}};
    proto.token_count_mean = 2.0;
    proto.token_count_var = 0.0;  // band = max(2, 0) = 2, so lengths 1..4

    pg::TokenStream page;
    page.tokens = pg::tokenize("1 2 3 4 5 6", false);
    pg::SlotMap slots;
    slots.page_length = page.tokens.size();

    auto cands = pg::enumerate_candidates("p", page, slots, proto);
    CHECK(cands.size() == 18);  // 6+5+4+3 spans of lengths 1..4
    for (const auto& c : cands) CHECK(c.end - c.start <= 4);

    pg::TokenStream tagged;
    tagged.tokens = pg::tokenize("1 <b> 2", true);
    pg::SlotMap tslots;
    tslots.page_length = tagged.tokens.size();
    auto tc = pg::enumerate_candidates("p", tagged, tslots, proto);
    bool saw_invisible = false;
    for (const auto& c : tc) {
        if (c.start == 0 && c.end == 3) {
            saw_invisible = true;
            CHECK_FALSE(c.visible);
            CHECK(c.text == "1 <b> 2");
        }
        if (c.end - c.start == 1) CHECK(c.visible);
    }
    CHECK(saw_invisible);
}

TEST_CASE("groups split on slot and context keys") {
    pg::CandidateExtract a1{"p1", 3, 4, "A", 1, "h", "r", true};
    pg::CandidateExtract a2{"p1", 3, 6, "A r A", 1, "h", "r", true};
    pg::CandidateExtract a3{"p1", 5, 6, "A", 1, "r", "r", true};
    pg::CandidateExtract a4{"p2", 3, 4, "B", 1, "h", "r", false};

    auto groups = pg::featurize_and_group({a1, a2, a3, a4});
    REQUIRE(groups.size() == 3);
    // std::map order: visible=false sorts before visible=true at equal keys.
    CHECK(groups[0].key == pg::GroupKey{1, "h", "r", false});
    CHECK(groups[0].members.size() == 1);
    CHECK(groups[1].key == pg::GroupKey{1, "h", "r", true});
    CHECK(groups[1].members.size() == 2);
    CHECK(groups[2].key == pg::GroupKey{1, "r", "r", true});
    CHECK(groups[2].members.size() == 1);
}

TEST_CASE("overlap with old values dominates scoring") {
    auto model = make_model("bigbook_phones.txt");

    pg::CandidateGroup real;
    real.key = {1, "x", "y", true};
    real.members = {{"p1", 0, 6, "( 310 ) 822 - 1511", 1, "x", "y", true},
                    {"p2", 0, 6, "( 626 ) 793 - 8123", 1, "x", "y", true}};
    pg::CandidateGroup junk;
    junk.key = {1, "a", "b", true};
    junk.members = {{"p1", 9, 11, "zzz qqq", 1, "a", "b", true}};

    SUBCASE("overlap ranks first and suppresses the fallback") {
        auto ranked = pg::score_groups({junk, real}, model.old_values,
                                       model.profile, 2);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked[0].key == real.key);
        CHECK(ranked[0].overlap == 2);
        CHECK(ranked[1].overlap == 0);
        CHECK(ranked[0].q == 0.0);
        CHECK(ranked[1].q == 0.0);
    }
    SUBCASE("without overlap the profile statistic ranks groups") {
        auto ranked = pg::score_groups({junk, real}, {}, model.profile, 2);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked[0].key == real.key);
        CHECK(ranked[0].overlap == 0);
        CHECK(ranked[0].q < ranked[1].q);
        CHECK(std::isinf(ranked[1].q));
    }
}

TEST_CASE("listing pair relabels every field on both pages") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});

    std::map<std::string, pg::FieldModel> fields = {
        {"name", make_model("bigbook_names.txt")},
        {"address", make_model("bigbook_addresses.txt")},
        {"city", make_model("bigbook_cities.txt")},
        {"phone", make_model("bigbook_phones.txt")},
    };

    auto result = pg::label_pages({{"a", a}, {"b", b}}, tpl, fields);

    auto got = label_set(result);
    std::set<LabelTuple> want = {
        {"a", "name", 32, 33, "Saladang"},
        {"b", "name", 32, 34, "Cajun Kitchen"},
        {"a", "address", 35, 40, "363 South Fair Oaks Avenue"},
        {"b", "address", 36, 40, "420 South Fairview Avenue"},
        {"a", "city", 41, 42, "Pasadena"},
        {"b", "city", 41, 42, "Goleta"},
        {"a", "phone", 46, 52, "( 626 ) 793 - 8123"},
        {"b", "phone", 46, 52, "( 805 ) 683 - 8864"},
    };
    CHECK(got == want);

    REQUIRE(result.coverage.size() == 4);
    for (const auto& cov : result.coverage) {
        CAPTURE(cov.field);
        CHECK(cov.pages_labeled == 2);
        CHECK(cov.pages_total == 2);
        CHECK(cov.status == "induction-ready");
    }
    CHECK(result.coverage[0].field == "address");
    CHECK(result.coverage[3].field == "phone");
}

TEST_CASE("page order does not change the labels") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});
    std::map<std::string, pg::FieldModel> fields = {
        {"name", make_model("bigbook_names.txt")},
        {"phone", make_model("bigbook_phones.txt")},
    };
    auto fwd = pg::label_pages({{"a", a}, {"b", b}}, tpl, fields);
    auto rev = pg::label_pages({{"b", b}, {"a", a}}, tpl, fields);
    CHECK(label_set(fwd) == label_set(rev));
}

TEST_CASE("earliest span on a page wins inside the winning group") {
    pg::TokenStream p0, p1;
    p0.tokens = pg::tokenize("h h h A r A r s s s", false);
    p1.tokens = pg::tokenize("h h h B r B r s s s", false);
    auto tpl = pg::find_template({p0, p1});
    REQUIRE(tpl.sequences.size() == 2);

    pg::FieldModel model;
    model.proto.field = "mark";
    model.proto.start_patterns = {{"ALLCAPS"}};
    model.proto.end_patterns = {{"ALLCAPS"}};
    model.proto.token_count_mean = 1.0;
    model.proto.token_count_var = 0.0;
    model.proto.sample_size = 2;
    model.old_values = {"A", "B"};

    auto result = pg::label_pages({{"p0", p0}, {"p1", p1}},
                                  tpl, {{"mark", model}});
    auto got = label_set(result);
    std::set<LabelTuple> want = {
        {"p0", "mark", 3, 4, "A"},
        {"p1", "mark", 3, 4, "B"},
    };
    CHECK(got == want);
}

TEST_CASE("coverage reports partial and missing fields") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});

    pg::FieldModel one_page;
    one_page.proto.field = "only-a";
    one_page.proto.start_patterns = {{"=Saladang"}};
    one_page.proto.end_patterns = {{"=Saladang"}};
    one_page.proto.token_count_mean = 1.0;
    one_page.proto.token_count_var = 0.0;
    one_page.old_values = {"Saladang"};

    pg::FieldModel nowhere;
    nowhere.proto.field = "absent";
    nowhere.proto.start_patterns = {{"=zzz"}};
    nowhere.proto.end_patterns = {{"=zzz"}};
    nowhere.proto.token_count_mean = 1.0;
    nowhere.proto.token_count_var = 0.0;

    auto result = pg::label_pages({{"a", a}, {"b", b}}, tpl,
                                  {{"only-a", one_page}, {"absent", nowhere}});
    REQUIRE(result.coverage.size() == 2);
    CHECK(result.coverage[0].field == "absent");
    CHECK(result.coverage[0].pages_labeled == 0);
    CHECK(result.coverage[0].status == "unlabeled");
    CHECK(result.coverage[1].field == "only-a");
    CHECK(result.coverage[1].pages_labeled == 1);
    CHECK(result.coverage[1].status == "below-threshold");
}

TEST_CASE("labeling rejects pages that lost the template") {
    auto a = load_page("listing_a.html");
    auto b = load_page("listing_b.html");
    auto tpl = pg::find_template({a, b});
    pg::TokenStream broken;
    broken.tokens = pg::tokenize("<html> gone </html>", true);
    std::map<std::string, pg::FieldModel> fields = {
        {"name", make_model("bigbook_names.txt")}};
    CHECK_THROWS_AS(pg::label_pages({{"a", a}, {"x", broken}}, tpl, fields),
                    std::runtime_error);
}
