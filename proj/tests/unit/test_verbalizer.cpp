#include <doctest.h>

#include "kgnbr/error.hpp"
#include "kgnbr/verbalizer.hpp"
#include "support/fixtures.hpp"

#include <random>
#include <sstream>

using namespace kgnbr;

namespace {

struct Fixture {
    kgnbr::testing::MiniGraph m = kgnbr::testing::steve_jobs_graph();
    Verbalizer verbalizer{m.graph.vocabulary(), m.catalog};

    Query birth_query() const {
        const auto& v = m.graph.vocabulary();
        return Query{*v.find_entity("Q19837"), *v.find_relation("P19"), false, *v.find_entity("Q47265")};
    }
};

std::size_t split_count(const std::string& s) {
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string w; in >> w;) ++n;
    return n;
}

std::string join_prefix(std::string_view task, const std::vector<std::string>& ns, std::size_t k) {
    std::string s(task);
    for (std::size_t i = 0; i < k; ++i) s += " [SEP] " + ns[i];
    return s;
}

std::shared_ptr<const Tokenizer> tiny_subword() {
    return make_tokenizer(std::string(KGNBR_TEST_DATA) + "/tiny_tokenizer.json");
}

}  // namespace

TEST_CASE("task strings") {
    Fixture f;
    CHECK(f.verbalizer.task(f.birth_query()) == "predict Steve Jobs place of birth");
    const auto& v = f.m.graph.vocabulary();
    // Inverse of (Apple, founded by, Steve Jobs).
    Query inv{*v.find_entity("Q19837"), *v.find_relation("P112"), true, *v.find_entity("Q312")};
    CHECK(f.verbalizer.task(inv) == "predict Steve Jobs inverse of founded by");
    CHECK(f.verbalizer.target(inv) == "Apple");
    CHECK(f.verbalizer.target(f.birth_query()) == "Palo Alto");
}

TEST_CASE("missing or empty text is an error naming the id") {
    KnowledgeGraph::Builder b;
    b.add("Q1", "P1", "Q2");
    b.add("Q1", "P2", "Q3");
    auto g = std::move(b).build();
    TextCatalog cat({{"Q1", "one"}, {"Q2", "two"}}, {{"P1", ""}});
    Verbalizer vz(g.vocabulary(), cat);
    const auto& t = g.triples()[0];
    CHECK_THROWS_AS(vz.task(Query{t.head, t.relation, false, t.tail}), Error);
    try {
        vz.task(Query{t.head, g.triples()[1].relation, false, std::nullopt});
        FAIL("expected not found");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("P2") != std::string::npos);
    }
}

TEST_CASE("neighbor strings") {
    Fixture f;
    auto nbh = form_neighborhood(f.birth_query(), f.m.graph, f.m.matrix);
    REQUIRE(nbh.neighbors.size() == 2);
    CHECK(f.verbalizer.neighbor(nbh.neighbors[0]) == "occupation entrepreneur");
    CHECK(f.verbalizer.neighbor(nbh.neighbors[1]) == "inverse of founded by Apple");

    KnowledgeGraph::Builder b;
    b.add("A", "likes", "A");
    auto g = std::move(b).build();
    TextCatalog cat({{"A", "A"}}, {{"likes", "likes"}});
    Verbalizer vz(g.vocabulary(), cat);
    NeighborTriple loop{g.triples()[0], Direction::Outgoing, 1.0, 0};
    CHECK(vz.neighbor(loop) == "likes A");
    loop.direction = Direction::Incoming;
    CHECK(vz.neighbor(loop) == "inverse of likes A");
}

TEST_CASE("assembly golden") {
    Fixture f;
    auto nbh = form_neighborhood(f.birth_query(), f.m.graph, f.m.matrix);
    auto vq = f.verbalizer.assemble(nbh, TokenBudget{});
    CHECK(vq.input_text ==
          "predict Steve Jobs place of birth [SEP] occupation entrepreneur [SEP] inverse of founded by Apple");
    CHECK(vq.target_text == "Palo Alto");
    CHECK(vq.included_count == 2);
    CHECK(vq.task() == "predict Steve Jobs place of birth");
    CHECK(vq.neighbor(0) == "occupation entrepreneur");
    CHECK(vq.neighbor(1) == "inverse of founded by Apple");
    CHECK(vq.token_count == split_count(vq.input_text));
    CHECK(vq.token_count == 15);

    TokenBudget sub{512, tiny_subword()};
    auto vs = f.verbalizer.assemble(nbh, sub);
    CHECK(vs.input_text == vq.input_text);
    // predict steve jobs place of birth [SEP] occupation entre ##pre ##neur [SEP] inverse of
    // found ##ed by apple
    CHECK(vs.token_count == 18);
}

TEST_CASE("zero neighbors") {
    auto vq = assemble_input("predict a b", {}, "c", TokenBudget{});
    CHECK(vq.input_text == "predict a b");
    CHECK(vq.included_count == 0);
    CHECK(vq.neighbor_spans.empty());
}

TEST_CASE("budget admitting exactly seven of 100 neighbors") {
    std::string task = "predict x r";
    std::vector<std::string> ns;
    for (int i = 0; i < 100; ++i) {
        std::string s = "rel";
        for (int w = 0; w < 69; ++w) s += " w" + std::to_string(i);
        ns.push_back(s);
    }
    auto vq = assemble_input(task, ns, "t", TokenBudget{});
    std::size_t admitted = 0;
    for (std::size_t k = 0; k <= ns.size(); ++k)
        if (split_count(join_prefix(task, ns, k)) <= 512) admitted = k;
    CHECK(admitted == 7);
    CHECK(vq.included_count == admitted);
    CHECK(vq.token_count <= 512);
    CHECK(vq.input_text == join_prefix(task, ns, 7));
}

TEST_CASE("task over budget is rejected") {
    std::string task = "predict";
    for (int i = 0; i < 600; ++i) task += " w";
    try {
        assemble_input(task, {}, "", TokenBudget{});
        FAIL("expected invalid argument");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::InvalidArgument);
    }
}

TEST_CASE("count_tokens") {
    TokenBudget ws;
    CHECK(count_tokens("", ws) == 0);
    CHECK(count_tokens("a b c", ws) == 3);
    std::string golden =
        "predict Steve Jobs place of birth [SEP] occupation entrepreneur [SEP] inverse of founded by Apple";
    CHECK(count_tokens(golden, ws) == split_count(golden));

    TokenBudget sub{512, tiny_subword()};
    CHECK(count_tokens("", sub) == 0);
    CHECK(count_tokens("founded", sub) == 2);
    CHECK(count_tokens("Apple.", sub) == 2);
    CHECK(count_tokens("zzzq", sub) == 1);       // unknown word
    CHECK(count_tokens("[SEP]", sub) == 1);
    CHECK(count_tokens("a1234", sub) == 5);
}

TEST_CASE("split_input inverts assembly") {
    std::vector<std::string> ns{"occupation entrepreneur", "inverse of founded by Apple"};
    auto vq = assemble_input("predict Steve Jobs place of birth", ns, "Palo Alto", TokenBudget{});
    auto back = split_input(vq.input_text, "Palo Alto");
    CHECK(back.task_span == vq.task_span);
    CHECK(back.neighbor_spans == vq.neighbor_spans);
    CHECK(back.included_count == 2);
}

TEST_CASE("property: budget, prefix monotonicity, spans and determinism") {
    std::mt19937_64 rng(512);
    std::vector<std::string> words{"a", "b", "c", "the", "head", "target", "founded", "apple.", "zzz", "palo", "alto,"};
    std::vector<TokenBudget> budgets{TokenBudget{}, TokenBudget{512, tiny_subword()}};
    for (int trial = 0; trial < 200; ++trial) {
        auto phrase = [&](std::size_t n) {
            std::string s = words[rng() % words.size()];
            for (std::size_t i = 1; i < n; ++i) s += " " + words[rng() % words.size()];
            return s;
        };
        std::string task = "predict " + phrase(1 + rng() % 4);
        std::vector<std::string> ns(rng() % 150);
        for (auto& n : ns) n = phrase(1 + rng() % 12);
        TokenBudget budget = budgets[trial % 2];
        budget.max_tokens = 20 + rng() % 500;
        auto vq = assemble_input(task, ns, "x", budget);

        CHECK(vq.token_count == budget.tokenizer->count(vq.input_text));
        CHECK(vq.token_count <= budget.max_tokens);
        if (vq.included_count < ns.size())
            CHECK(budget.tokenizer->count(join_prefix(task, ns, vq.included_count + 1)) > budget.max_tokens);
        if (vq.included_count > 0)
            CHECK(budget.tokenizer->count(join_prefix(task, ns, vq.included_count - 1)) <= vq.token_count);

        CHECK(vq.task() == task);
        REQUIRE(vq.neighbor_spans.size() == vq.included_count);
        std::size_t covered = vq.task_span.size();
        for (std::size_t i = 0; i < vq.included_count; ++i) {
            CHECK(vq.neighbor(i) == ns[i]);
            auto prev_end = i == 0 ? vq.task_span.end : vq.neighbor_spans[i - 1].end;
            CHECK(vq.neighbor_spans[i].begin == prev_end + kSeparator.size());
            covered += vq.neighbor_spans[i].size();
        }
        CHECK(covered + vq.included_count * kSeparator.size() == vq.input_text.size());
        CHECK(assemble_input(task, ns, "x", budget).input_text == vq.input_text);
    }
}

TEST_CASE("property: the excluded edge is never verbalized") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        auto rg = kgnbr::testing::random_graph(rng, 4 + trial % 10, 1 + trial % 4, 10 + trial % 50);
        const auto& g = rg.graph;
        std::unordered_map<std::string, std::string> et, rt;
        for (auto e : g.entities()) et[g.vocabulary().entity_name(e)] = "ent" + g.vocabulary().entity_name(e);
        for (auto r : g.relations()) rt[g.vocabulary().relation_name(r)] = "rel" + g.vocabulary().relation_name(r);
        TextCatalog cat(et, rt);
        Verbalizer vz(g.vocabulary(), cat);
        const auto& t = g.triples()[rng() % g.triples().size()];
        Query q{t.head, t.relation, false, t.tail};
        auto vq = vz.assemble(form_neighborhood(q, g, rg.matrix), TokenBudget{});
        std::string leaked = cat.relation_text(g.vocabulary().relation_name(t.relation)) + " " +
                             cat.entity_text(g.vocabulary().entity_name(t.tail));
        for (std::size_t i = 0; i < vq.included_count; ++i) {
            CHECK(vq.neighbor(i) != leaked);
            CHECK(vq.neighbor(i) != "inverse of " + leaked);
        }
    }
}
