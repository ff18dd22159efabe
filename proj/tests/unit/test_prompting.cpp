#include <doctest.h>

#include "kgnbr/error.hpp"
#include "kgnbr/prompting.hpp"
#include "kgnbr/rng.hpp"
#include "support/fixtures.hpp"

#include <random>

using namespace kgnbr;

namespace {

std::string fixture(const char* name) {
    return kgnbr::testing::read_file(std::string(KGNBR_TEST_DATA) + "/" + name);
}

std::uint64_t fnv(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ull;
    return h;
}

VerbalizedQuery steve_jobs(bool neighbors) {
    std::vector<std::string> ns;
    if (neighbors) ns = {"occupation entrepreneur", "inverse of founded by Apple"};
    return assemble_input("predict Steve Jobs place of birth", ns, "Palo Alto", TokenBudget{});
}

}  // namespace

TEST_CASE("system templates match the golden fixtures") {
    auto plain = fixture("system_prompt_plain.txt");
    auto with = fixture("system_prompt_neighbors.txt");
    CHECK(plain.size() == 311);
    CHECK(with.size() == 402);
    CHECK(fnv(plain) == 0xa1de14ee0b149820ull);
    CHECK(fnv(with) == 0x23ab251004747479ull);
    CHECK(kSystemPromptPlain == plain);
    CHECK(kSystemPromptWithNeighbors == with);
    CHECK(fnv(kSystemPromptPlain) == fnv(plain));
    CHECK(fnv(kSystemPromptWithNeighbors) == fnv(with));
}

TEST_CASE("build_prompt") {
    auto p = build_prompt(steve_jobs(false), false);
    CHECK(p.user_text == "Triplet to complete: predict Steve Jobs place of birth.");
    CHECK(p.system_text == kSystemPromptPlain);

    auto n = build_prompt(steve_jobs(true), true);
    CHECK(n.user_text.rfind("Adjacent relations: ", 0) == 0);
    CHECK(n.user_text ==
          "Adjacent relations: occupation entrepreneur [SEP] inverse of founded by Apple\n"
          "Triplet to complete: predict Steve Jobs place of birth.");
    CHECK(n.system_text == kSystemPromptWithNeighbors);

    auto e = build_prompt(steve_jobs(false), true);
    CHECK(e.user_text == "Adjacent relations: \nTriplet to complete: predict Steve Jobs place of birth.");
}

TEST_CASE("parse_answer") {
    CHECK(parse_answer("Tail: Palo Alto") == "Palo Alto");
    CHECK(parse_answer("Palo Alto") == "Palo Alto");
    CHECK(parse_answer("Tail: Palo Alto\nRelation: place of birth") == "Palo Alto");
    CHECK(parse_answer("  tail:Palo Alto  \r\n") == "Palo Alto");
    CHECK(parse_answer("TAIL :  Palo Alto") == "Palo Alto");
    CHECK(parse_answer("\n\nTail: Palo Alto\n") == "Palo Alto");
    CHECK(parse_answer("Tail:") == "");
    CHECK(parse_answer("") == "");
    CHECK(parse_answer("Tailwind CSS") == "Tailwind CSS");
}

TEST_CASE("normalize_answer") {
    CHECK(normalize_answer(" Palo  Alto. ") == "palo alto");
    CHECK(normalize_answer("\"Armenia\"") == "armenia");
    CHECK(normalize_answer("\xE2\x80\x9C" "Armenia\xE2\x80\x9D") == "armenia");
    CHECK(normalize_answer("'\"Armenia.\"'") == "armenia");
    CHECK(normalize_answer("Caf\xC3\xA9") == normalize_answer("Cafe\xCC\x81"));
    CHECK(normalize_answer("ÉCOLE") == "école");
    CHECK(normalize_answer("...") == "");
    CHECK(normalize_answer("U.S.") == "u.s");
}

TEST_CASE("property: normalize_answer is idempotent") {
    std::mt19937_64 rng(10000);
    const std::vector<std::string> atoms{"a", "B", " ", "  ", "\t", ".", ",", "\"", "'", "(", ")", "-",
                                         "\xC3\xA9", "e\xCC\x81", "\xC3\x89", "\xE2\x80\x9C", "\xE2\x80\x9D",
                                         "\xC2\xA0", "!", "?", "Z", "1", "\xCE\xA3", "\xE2\x80\x94"};
    for (int i = 0; i < 10000; ++i) {
        std::string s;
        for (std::size_t n = rng() % 12; n > 0; --n) s += atoms[rng() % atoms.size()];
        auto once = normalize_answer(s);
        CHECK(normalize_answer(once) == once);
    }
}

TEST_CASE("select_predictions is a seeded permutation prefix") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        // Independent reimplementation: Fisher-Yates on mt19937_64 output.
        std::vector<std::size_t> expected{0, 1, 2};
        std::mt19937_64 gen(seed);
        for (std::size_t i = expected.size(); i > 1; --i) std::swap(expected[i - 1], expected[gen() % i]);

        auto three = select_predictions(3, 3, seed);
        auto one = select_predictions(3, 1, seed);
        CHECK(three == expected);
        REQUIRE(one.size() == 1);
        CHECK(one[0] == three[0]);
    }
    CHECK(select_predictions(2, 3, 5).size() == 2);
    CHECK(select_predictions(0, 3, 5).empty());
}

TEST_CASE("gpt_hits") {
    std::vector<std::string> preds{"Paris", "Lyon", "Palo Alto"};
    CHECK(gpt_hits(preds, "palo alto.", 3, 1) == 1);
    std::vector<std::string> miss{"Paris", "Lyon", "Nice"};
    CHECK(gpt_hits(miss, "Palo Alto", 1, 1) == 0);
    CHECK(gpt_hits(miss, "Palo Alto", 3, 1) == 0);

    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        std::vector<std::size_t> order{0, 1, 2};
        std::mt19937_64 gen(seed);
        for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[gen() % i]);
        int expected = order[0] == 2 ? 1 : 0;
        CHECK(gpt_hits(preds, "Palo Alto", 1, seed) == expected);
        CHECK(gpt_hits(preds, "Palo Alto", 1, seed) <= gpt_hits(preds, "Palo Alto", 3, seed));
    }

    std::vector<std::string> four{"a", "b", "c", "d"};
    CHECK_THROWS_AS(gpt_hits(four, "a", 1, 0), Error);
    CHECK_THROWS_AS(gpt_hits(preds, "a", 0, 0), Error);
    std::vector<std::string> blank{"", "  "};
    CHECK(gpt_hits(blank, "", 3, 0) == 0);
}
