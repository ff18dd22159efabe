#include <doctest.h>

#include "kgnbr/cli.hpp"
#include "kgnbr/dataset.hpp"
#include "support/fixtures.hpp"

#include <cstdlib>
#include <sstream>

using kgnbr::testing::read_file;
using kgnbr::testing::TempDir;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "kgnbr");
    args.insert(args.begin() + 1, {"--log-level", "off"});
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = kgnbr::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

struct Workspace {
    TempDir dir;
    std::string train, labels, relation_labels, vectors;

    Workspace() {
        train = dir.write("train.tsv",
                          "Q19837\tP19\tQ47265\n"
                          "Q19837\tP106\tQ131524\n"
                          "Q312\tP112\tQ19837\n");
        labels = dir.write("labels.tsv",
                           "Q19837\tSteve Jobs\nQ47265\tPalo Alto\nQ131524\tentrepreneur\nQ312\tApple\n");
        relation_labels = dir.write("relations.tsv", "P19\tplace of birth\nP106\toccupation\nP112\tfounded by\n");
        vectors = dir.write("vectors.txt", "3 3\nP19 1 0 0\nP106 0.6 0.8 0\nP112 0.2 0 0.9\n");
    }

    std::vector<std::string> catalog_flags() const {
        return {"--labels", labels, "--relation-labels", relation_labels};
    }

    std::vector<std::string> emit_args(const std::string& out) const {
        std::vector<std::string> a{"emit", "--triples", train, "--relation-vectors", vectors, "--out", out};
        auto c = catalog_flags();
        a.insert(a.end(), c.begin(), c.end());
        return a;
    }
};

}  // namespace

TEST_CASE("stats and ingest") {
    Workspace w;
    auto r = run({"stats", "--triples", w.train});
    CHECK(r.code == 0);
    CHECK(r.out == "entities\trelations\ttriples\n4\t3\t3\n");

    auto snap = w.dir.file("g.snap");
    CHECK(run({"ingest", "--triples", w.train, "--out", snap, "--tsv-out", w.dir.file("re.tsv")}).code == 0);
    CHECK(run({"stats", "--snapshot", snap, "--no-header"}).out == "4\t3\t3\n");
    CHECK(read_file(w.dir.file("re.tsv")) == read_file(w.train));
}

TEST_CASE("build-sim") {
    Workspace w;
    auto r = run({"build-sim", "--relation-vectors", w.vectors, "--out", w.dir.file("m.bin")});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("relations\tdim\tchecksum\n3\t3\t", 0) == 0);
}

TEST_CASE("emit, oracle, score: memorizer self-evaluation") {
    Workspace w;
    auto records = w.dir.file("d.jsonl");
    auto r = run(w.emit_args(records));
    REQUIRE(r.code == 0);
    CHECK(r.out == "queries\twritten\tskipped\n6\t6\t0\n");
    auto ds = kgnbr::read_dataset(records);
    REQUIRE(ds.size() == 6);
    CHECK(ds[0].input_text ==
          "predict Steve Jobs place of birth [SEP] occupation entrepreneur [SEP] inverse of founded by Apple");

    auto preds = w.dir.file("p.jsonl");
    std::vector<std::string> oracle{"oracle", "--kind", "memorizer", "--triples", w.train, "--dataset", records, "--out", preds};
    for (auto& f : w.catalog_flags()) oracle.push_back(f);
    REQUIRE(run(oracle).code == 0);

    std::vector<std::string> score{"score", "--dataset", records, "--predictions", preds, "--no-filter",
                                   "--report", w.dir.file("report.tsv")};
    for (auto& f : w.catalog_flags()) score.push_back(f);
    auto s = run(score);
    REQUIRE(s.code == 0);
    CHECK(s.out.find("hits@1\t1.000000\n") != std::string::npos);
    CHECK(s.out.find("exact_match\t1.000000\n") != std::string::npos);
    CHECK(read_file(w.dir.file("report.tsv")).find("combined\t1001.000000\n") != std::string::npos);
}

TEST_CASE("analyze-target, ablate and prompt") {
    Workspace w;
    auto records = w.dir.file("d.jsonl");
    REQUIRE(run(w.emit_args(records)).code == 0);

    auto at = run({"analyze-target", "--dataset", records});
    CHECK(at.code == 0);
    CHECK(at.out.rfind("position\tcount\tfraction\n", 0) == 0);

    std::vector<std::string> abl{"ablate", "--triples", w.train, "--relation-vectors", w.vectors,
                                 "--oracle", "hint_reader", "--mode", "random", "--removals", "0", "--removals", "2",
                                 "--seeds", "3"};
    for (auto& f : w.catalog_flags()) abl.push_back(f);
    auto a = run(abl);
    CHECK(a.code == 0);
    CHECK(a.out.rfind("removed\tmetric\n0\t", 0) == 0);

    auto p = run({"prompt", "--dataset", records, "--out", w.dir.file("prompts.jsonl"), "--with-neighbors"});
    CHECK(p.code == 0);
    CHECK(read_file(w.dir.file("prompts.jsonl")).find("Adjacent relations: ") != std::string::npos);
}

TEST_CASE("exit codes") {
    Workspace w;
    CHECK(run({"stats", "--bogus"}).code == kgnbr::cli::kUsage);
    CHECK(run({"nonsense"}).code == kgnbr::cli::kUsage);
    CHECK(run({"stats", "--triples", w.dir.file("missing.tsv")}).code == kgnbr::cli::kIo);
    CHECK(run({"stats", "--triples", w.dir.write("bad.tsv", "a\tb\n")}).code == kgnbr::cli::kParse);
    CHECK(run({"analyze-target", "--dataset", w.dir.write("bad.jsonl", "{\"query_id\": 3}\n")}).code != 0);
    CHECK(run({"stats", "--snapshot", w.dir.write("bad.snap", "garbage!")}).code == kgnbr::cli::kSchema);
    std::vector<std::string> bad_ablate{"ablate", "--triples", w.train, "--relation-vectors", w.vectors,
                                        "--oracle", "psychic"};
    for (auto& f : w.catalog_flags()) bad_ablate.push_back(f);
    CHECK(run(bad_ablate).code == kgnbr::cli::kInvalid);
    auto r = run({"stats", "--triples", w.dir.file("missing.tsv")});
    CHECK(r.err.find("missing.tsv") != std::string::npos);
}

TEST_CASE("output does not depend on worker count") {
    Workspace w;
    auto a = w.emit_args(w.dir.file("a.jsonl"));
    auto b = w.emit_args(w.dir.file("b.jsonl"));
    b.insert(b.begin(), {"--workers", "4"});
    REQUIRE(run(a).code == 0);
    REQUIRE(run(b).code == 0);
    CHECK(read_file(w.dir.file("a.jsonl")) == read_file(w.dir.file("b.jsonl")));
}

TEST_CASE("precedence: flags over config over environment over defaults") {
    Workspace w;
    auto out = w.dir.file("d.jsonl");
    auto first_input = [&] { return kgnbr::read_dataset(out).at(0).input_text; };
    const std::string task = "predict Steve Jobs place of birth";

    REQUIRE(run(w.emit_args(out)).code == 0);
    CHECK(first_input() == task + " [SEP] occupation entrepreneur [SEP] inverse of founded by Apple");

    ::setenv("KGNBR_CAP", "0", 1);
    REQUIRE(run(w.emit_args(out)).code == 0);
    CHECK(first_input() == task);

    auto cfg = w.dir.write("run.ini", "[emit]\ncap=1\n");
    auto with_cfg = w.emit_args(out);
    with_cfg.insert(with_cfg.begin(), {"--config", cfg});
    REQUIRE(run(with_cfg).code == 0);
    CHECK(first_input() == task + " [SEP] occupation entrepreneur");

    auto with_flag = with_cfg;
    with_flag.insert(with_flag.end(), {"--cap", "2"});
    REQUIRE(run(with_flag).code == 0);
    CHECK(first_input() == task + " [SEP] occupation entrepreneur [SEP] inverse of founded by Apple");
    ::unsetenv("KGNBR_CAP");
}

TEST_CASE("data root resolves relative paths") {
    Workspace w;
    ::setenv("KGNBR_DATA_ROOT", w.train.substr(0, w.train.rfind('/')).c_str(), 1);
    auto r = run({"stats", "--triples", "train.tsv", "--no-header"});
    ::unsetenv("KGNBR_DATA_ROOT");
    CHECK(r.code == 0);
    CHECK(r.out == "4\t3\t3\n");
}
