#include "kgnbr/kg_store.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>

namespace kgnbr {

std::string_view to_string(Direction d) {
    return d == Direction::Outgoing ? "outgoing" : "incoming";
}

std::string_view to_string(SplitTag s) {
    switch (s) {
        case SplitTag::Train: return "train";
        case SplitTag::Valid: return "valid";
        case SplitTag::Test: return "test";
        case SplitTag::Inference: return "inference";
    }
    return "train";
}

SplitTag parse_split_tag(std::string_view s) {
    if (s == "train") return SplitTag::Train;
    if (s == "valid") return SplitTag::Valid;
    if (s == "test") return SplitTag::Test;
    if (s == "inference") return SplitTag::Inference;
    throw invalid_argument("unknown split tag '" + std::string(s) + "'");
}

// ---- Vocabulary ----

EntityId Vocabulary::intern_entity(std::string_view name) {
    if (auto it = entity_index_.find(name); it != entity_index_.end()) return {it->second};
    auto id = static_cast<std::uint32_t>(entity_names_.size());
    entity_names_.emplace_back(name);
    entity_index_.emplace(std::string(name), id);
    return {id};
}

RelationId Vocabulary::intern_relation(std::string_view name) {
    if (auto it = relation_index_.find(name); it != relation_index_.end()) return {it->second};
    auto id = static_cast<std::uint32_t>(relation_names_.size());
    relation_names_.emplace_back(name);
    relation_index_.emplace(std::string(name), id);
    return {id};
}

std::optional<EntityId> Vocabulary::find_entity(std::string_view name) const {
    if (auto it = entity_index_.find(name); it != entity_index_.end()) return EntityId{it->second};
    return std::nullopt;
}

std::optional<RelationId> Vocabulary::find_relation(std::string_view name) const {
    if (auto it = relation_index_.find(name); it != relation_index_.end())
        return RelationId{it->second};
    return std::nullopt;
}

// ---- KnowledgeGraph ----

bool KnowledgeGraph::contains_entity(EntityId e) const noexcept {
    return !head_positions(e).empty() || !tail_positions(e).empty();
}

bool KnowledgeGraph::contains(const Triple& t) const {
    for (auto pos : head_positions(t.head))
        if (triples_[pos] == t) return true;
    return false;
}

std::span<const std::uint32_t> KnowledgeGraph::head_positions(EntityId e) const noexcept {
    if (e.value + 1 >= head_offsets_.size()) return {};
    return std::span(head_index_).subspan(head_offsets_[e.value],
                                          head_offsets_[e.value + 1] - head_offsets_[e.value]);
}

std::span<const std::uint32_t> KnowledgeGraph::tail_positions(EntityId e) const noexcept {
    if (e.value + 1 >= tail_offsets_.size()) return {};
    return std::span(tail_index_).subspan(tail_offsets_[e.value],
                                          tail_offsets_[e.value + 1] - tail_offsets_[e.value]);
}

std::optional<Triple> KnowledgeGraph::resolve(std::string_view h, std::string_view r,
                                              std::string_view t) const {
    auto hid = vocab_->find_entity(h);
    auto rid = vocab_->find_relation(r);
    auto tid = vocab_->find_entity(t);
    if (!hid || !rid || !tid) return std::nullopt;
    return Triple{*hid, *rid, *tid};
}

KnowledgeGraph::Builder::Builder(std::shared_ptr<Vocabulary> vocab, SplitTag split)
    : vocab_(std::move(vocab)), split_(split) {
    if (!vocab_) vocab_ = std::make_shared<Vocabulary>();
}

bool KnowledgeGraph::Builder::add(std::string_view head, std::string_view relation,
                                  std::string_view tail) {
    Triple t{vocab_->intern_entity(head), vocab_->intern_relation(relation),
             vocab_->intern_entity(tail)};
    return add(t);
}

bool KnowledgeGraph::Builder::add(const Triple& t) {
    if (t.head.value >= vocab_->entity_count() || t.tail.value >= vocab_->entity_count() ||
        t.relation.value >= vocab_->relation_count())
        throw invalid_argument("triple references ids outside the vocabulary");
    if (!seen_.insert(t).second) {
        ++duplicates_;
        return false;
    }
    triples_.push_back(t);
    return true;
}

namespace {

void build_csr(std::size_t n, const std::vector<Triple>& triples, bool by_head,
               std::vector<std::uint32_t>& offsets, std::vector<std::uint32_t>& index) {
    offsets.assign(n + 1, 0);
    for (const auto& t : triples) ++offsets[(by_head ? t.head : t.tail).value + 1];
    for (std::size_t i = 1; i <= n; ++i) offsets[i] += offsets[i - 1];
    index.resize(triples.size());
    std::vector<std::uint32_t> cursor(offsets.begin(), offsets.end() - 1);
    for (std::uint32_t pos = 0; pos < triples.size(); ++pos) {
        const auto& t = triples[pos];
        index[cursor[(by_head ? t.head : t.tail).value]++] = pos;
    }
}

}  // namespace

KnowledgeGraph KnowledgeGraph::Builder::build() && {
    KnowledgeGraph g;
    g.vocab_ = vocab_;
    g.split_ = split_;
    g.triples_ = std::move(triples_);
    g.duplicates_dropped_ = duplicates_;
    seen_.clear();

    const std::size_t n = vocab_->entity_count();
    std::vector<bool> seen_entity(n, false);
    std::vector<bool> seen_relation(vocab_->relation_count(), false);
    auto note_entity = [&](EntityId e) {
        if (!seen_entity[e.value]) {
            seen_entity[e.value] = true;
            g.entities_.push_back(e);
        }
    };
    for (const auto& t : g.triples_) {
        note_entity(t.head);
        if (!seen_relation[t.relation.value]) {
            seen_relation[t.relation.value] = true;
            g.relations_.push_back(t.relation);
        }
        note_entity(t.tail);
    }
    build_csr(n, g.triples_, true, g.head_offsets_, g.head_index_);
    build_csr(n, g.triples_, false, g.tail_offsets_, g.tail_index_);
    return g;
}

// ---- ingestion ----

namespace {

bool blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::string_view trim_ascii(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::size_t split_on(std::string_view line, char sep, std::array<std::string_view, 3>& out) {
    std::size_t n = 0;
    std::size_t start = 0;
    for (;;) {
        auto pos = line.find(sep, start);
        auto field = line.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                      : pos - start);
        if (n < 3) out[n] = field;
        ++n;
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return n;
}

std::size_t split_whitespace(std::string_view line, std::array<std::string_view, 3>& out) {
    std::size_t n = 0;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (n < 3) out[n] = line.substr(i, j - i);
        ++n;
        i = j;
    }
    return n;
}

}  // namespace

KnowledgeGraph ingest_triples(std::span<const std::string> paths, TripleDialect dialect,
                              std::shared_ptr<Vocabulary> vocab, SplitTag split) {
    KnowledgeGraph::Builder builder(std::move(vocab), split);
    std::string line;
    for (const auto& path : paths) {
        LineReader reader(path);
        while (reader.next(line)) {
            if (blank(line)) continue;
            std::array<std::string_view, 3> f;
            std::size_t n;
            std::string_view view = line;
            if (dialect == TripleDialect::Tsv) {
                n = split_on(view, '\t', f);
            } else if (view.find('\t') != std::string_view::npos) {
                n = split_on(trim_ascii(view), '\t', f);
            } else if (view.find(',') != std::string_view::npos) {
                n = split_on(view, ',', f);
            } else {
                n = split_whitespace(view, f);
            }
            if (n != 3)
                throw ParseError(path, reader.line_number(),
                                 "expected 3 fields, found " + std::to_string(n));
            if (dialect == TripleDialect::Loose)
                for (auto& s : f) s = trim_ascii(s);
            for (auto s : f)
                if (s.empty()) throw ParseError(path, reader.line_number(), "empty field");
            builder.add(f[0], f[1], f[2]);
        }
    }
    auto graph = std::move(builder).build();
    if (graph.duplicates_dropped() > 0)
        spdlog::warn("dropped {} duplicate triples", graph.duplicates_dropped());
    return graph;
}

KnowledgeGraph ingest_triples(const std::string& path, TripleDialect dialect,
                              std::shared_ptr<Vocabulary> vocab, SplitTag split) {
    return ingest_triples(std::span(&path, 1), dialect, std::move(vocab), split);
}

// ---- queries ----

std::vector<Adjacency> adjacent(EntityId entity, const KnowledgeGraph& graph) {
    if (entity.value >= graph.vocabulary().entity_count())
        throw not_found("unknown entity id " + std::to_string(entity.value));
    auto heads = graph.head_positions(entity);
    auto tails = graph.tail_positions(entity);
    std::vector<Adjacency> out;
    out.reserve(heads.size() + tails.size());
    auto triples = graph.triples();
    std::size_t i = 0, j = 0;
    while (i < heads.size() || j < tails.size()) {
        if (j >= tails.size() || (i < heads.size() && heads[i] <= tails[j])) {
            out.push_back({triples[heads[i]], Direction::Outgoing, heads[i]});
            ++i;
        } else {
            out.push_back({triples[tails[j]], Direction::Incoming, tails[j]});
            ++j;
        }
    }
    return out;
}

namespace {

std::vector<EntityId> sorted_unique(std::vector<EntityId> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

}  // namespace

std::vector<EntityId> known_tails(EntityId head, RelationId relation,
                                  std::span<const KnowledgeGraph* const> graphs) {
    if (graphs.empty()) throw invalid_argument("known_tails requires at least one graph");
    std::vector<EntityId> out;
    for (const auto* g : graphs) {
        auto triples = g->triples();
        for (auto pos : g->head_positions(head))
            if (triples[pos].relation == relation) out.push_back(triples[pos].tail);
    }
    return sorted_unique(std::move(out));
}

std::vector<EntityId> known_heads(EntityId tail, RelationId relation,
                                  std::span<const KnowledgeGraph* const> graphs) {
    if (graphs.empty()) throw invalid_argument("known_heads requires at least one graph");
    std::vector<EntityId> out;
    for (const auto* g : graphs) {
        auto triples = g->triples();
        for (auto pos : g->tail_positions(tail))
            if (triples[pos].relation == relation) out.push_back(triples[pos].head);
    }
    return sorted_unique(std::move(out));
}

GraphStats stats(const KnowledgeGraph& graph) {
    return {graph.entities().size(), graph.relations().size(), graph.triples().size()};
}

KnowledgeGraph merge(std::span<const KnowledgeGraph* const> graphs, SplitTag split) {
    if (graphs.empty()) return KnowledgeGraph{};
    auto vocab = graphs.front()->shared_vocabulary();
    KnowledgeGraph::Builder builder(vocab, split);
    for (const auto* g : graphs) {
        if (g->shared_vocabulary() != vocab)
            throw invalid_argument("merge requires graphs sharing one vocabulary");
        for (const auto& t : g->triples()) builder.add(t);
    }
    return std::move(builder).build();
}

void write_triples_tsv(const KnowledgeGraph& graph, const std::string& path) {
    LineWriter out(path);
    const auto& v = graph.vocabulary();
    std::string line;
    for (const auto& t : graph.triples()) {
        line = v.entity_name(t.head);
        line += '\t';
        line += v.relation_name(t.relation);
        line += '\t';
        line += v.entity_name(t.tail);
        out.write_line(line);
    }
    out.close();
}

// ---- snapshot ----

namespace {

constexpr char kMagic[8] = {'K', 'G', 'N', 'B', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void put_le(std::ostream& os, T value) {
    static_assert(std::is_unsigned_v<T>);
    unsigned char buf[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(value >> (8 * i));
    os.write(reinterpret_cast<const char*>(buf), sizeof buf);
}

template <typename T>
T get_le(std::istream& is, const std::string& path) {
    unsigned char buf[sizeof(T)];
    if (!is.read(reinterpret_cast<char*>(buf), sizeof buf))
        throw schema_error("truncated snapshot " + path);
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(buf[i]) << (8 * i);
    return value;
}

void put_string(std::ostream& os, const std::string& s) {
    put_le<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string get_string(std::istream& is, const std::string& path) {
    auto n = get_le<std::uint32_t>(is, path);
    std::string s(n, '\0');
    if (n > 0 && !is.read(s.data(), n)) throw schema_error("truncated snapshot " + path);
    return s;
}

}  // namespace

void save_snapshot(const KnowledgeGraph& graph, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw io_error("cannot create " + path);
    const auto& v = graph.vocabulary();
    std::unordered_map<std::uint32_t, std::uint32_t> entity_local, relation_local;
    os.write(kMagic, sizeof kMagic);
    put_le<std::uint32_t>(os, kSnapshotVersion);
    put_le<std::uint8_t>(os, static_cast<std::uint8_t>(graph.split()));
    put_le<std::uint64_t>(os, graph.entities().size());
    for (auto e : graph.entities()) {
        entity_local.emplace(e.value, static_cast<std::uint32_t>(entity_local.size()));
        put_string(os, v.entity_name(e));
    }
    put_le<std::uint64_t>(os, graph.relations().size());
    for (auto r : graph.relations()) {
        relation_local.emplace(r.value, static_cast<std::uint32_t>(relation_local.size()));
        put_string(os, v.relation_name(r));
    }
    put_le<std::uint64_t>(os, graph.triples().size());
    for (const auto& t : graph.triples()) {
        put_le<std::uint32_t>(os, entity_local.at(t.head.value));
        put_le<std::uint32_t>(os, relation_local.at(t.relation.value));
        put_le<std::uint32_t>(os, entity_local.at(t.tail.value));
    }
    if (!os.flush()) throw io_error("write error in " + path);
}

KnowledgeGraph load_snapshot(const std::string& path, std::shared_ptr<Vocabulary> vocab) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw io_error("cannot open " + path);
    char magic[sizeof kMagic];
    if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
        throw schema_error(path + " is not a graph snapshot");
    auto version = get_le<std::uint32_t>(is, path);
    if (version != kSnapshotVersion)
        throw schema_error("unsupported snapshot version " + std::to_string(version));
    auto split_raw = get_le<std::uint8_t>(is, path);
    if (split_raw > static_cast<std::uint8_t>(SplitTag::Inference))
        throw schema_error("bad split tag in " + path);
    if (!vocab) vocab = std::make_shared<Vocabulary>();
    KnowledgeGraph::Builder builder(vocab, static_cast<SplitTag>(split_raw));

    auto n_ent = get_le<std::uint64_t>(is, path);
    std::vector<EntityId> ents;
    ents.reserve(n_ent);
    for (std::uint64_t i = 0; i < n_ent; ++i) ents.push_back(vocab->intern_entity(get_string(is, path)));
    auto n_rel = get_le<std::uint64_t>(is, path);
    std::vector<RelationId> rels;
    rels.reserve(n_rel);
    for (std::uint64_t i = 0; i < n_rel; ++i)
        rels.push_back(vocab->intern_relation(get_string(is, path)));
    auto n_tri = get_le<std::uint64_t>(is, path);
    for (std::uint64_t i = 0; i < n_tri; ++i) {
        auto h = get_le<std::uint32_t>(is, path);
        auto r = get_le<std::uint32_t>(is, path);
        auto t = get_le<std::uint32_t>(is, path);
        if (h >= ents.size() || t >= ents.size() || r >= rels.size())
            throw schema_error("snapshot triple index out of range in " + path);
        builder.add(Triple{ents[h], rels[r], ents[t]});
    }
    return std::move(builder).build();
}

}  // namespace kgnbr
