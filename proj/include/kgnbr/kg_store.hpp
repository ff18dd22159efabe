#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace kgnbr {

struct EntityId {
    std::uint32_t value = 0;
    friend auto operator<=>(EntityId, EntityId) = default;
};

struct RelationId {
    std::uint32_t value = 0;
    friend auto operator<=>(RelationId, RelationId) = default;
};

struct Triple {
    EntityId head;
    RelationId relation;
    EntityId tail;
    friend auto operator<=>(const Triple&, const Triple&) = default;
};

enum class Direction : std::uint8_t { Outgoing, Incoming };

enum class SplitTag : std::uint8_t { Train, Valid, Test, Inference };

enum class TripleDialect {
    Tsv,    // head<TAB>relation<TAB>tail
    Loose,  // tab, comma or whitespace separated
};

std::string_view to_string(Direction d);
std::string_view to_string(SplitTag s);
SplitTag parse_split_tag(std::string_view s);

struct TripleHash {
    std::size_t operator()(const Triple& t) const noexcept {
        std::uint64_t x = (std::uint64_t{t.head.value} << 32) ^ t.tail.value;
        x ^= std::uint64_t{t.relation.value} * 0x9E3779B97F4A7C15ull;
        x ^= x >> 29;
        x *= 0xBF58476D1CE4E5B9ull;
        x ^= x >> 32;
        return static_cast<std::size_t>(x);
    }
};

// String identifiers interned to dense ids. Shared by all splits of one dataset so that ids
// compare across train/valid/test graphs. Append-only.
class Vocabulary {
public:
    EntityId intern_entity(std::string_view name);
    RelationId intern_relation(std::string_view name);

    std::optional<EntityId> find_entity(std::string_view name) const;
    std::optional<RelationId> find_relation(std::string_view name) const;

    const std::string& entity_name(EntityId id) const { return entity_names_.at(id.value); }
    const std::string& relation_name(RelationId id) const {
        return relation_names_.at(id.value);
    }

    std::size_t entity_count() const noexcept { return entity_names_.size(); }
    std::size_t relation_count() const noexcept { return relation_names_.size(); }

private:
    struct StringHash {
        using is_transparent = void;
        std::size_t operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };
    using Index = std::unordered_map<std::string, std::uint32_t, StringHash, std::equal_to<>>;

    std::vector<std::string> entity_names_;
    std::vector<std::string> relation_names_;
    Index entity_index_;
    Index relation_index_;
};

struct GraphStats {
    std::size_t entity_count = 0;
    std::size_t relation_count = 0;
    std::size_t triple_count = 0;
    friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

struct Adjacency {
    Triple triple;
    Direction direction;
    std::uint32_t position;  // index into KnowledgeGraph::triples()
};

// Immutable, deduplicated triple set with head/tail adjacency (CSR layout). Safe for concurrent
// readers once built.
class KnowledgeGraph {
public:
    class Builder;

    KnowledgeGraph() : vocab_(std::make_shared<Vocabulary>()) {}

    const Vocabulary& vocabulary() const noexcept { return *vocab_; }
    const std::shared_ptr<Vocabulary>& shared_vocabulary() const noexcept { return vocab_; }
    SplitTag split() const noexcept { return split_; }

    std::span<const Triple> triples() const noexcept { return triples_; }
    // Entities and relations in order of first occurrence.
    std::span<const EntityId> entities() const noexcept { return entities_; }
    std::span<const RelationId> relations() const noexcept { return relations_; }

    bool contains_entity(EntityId e) const noexcept;
    bool contains(const Triple& t) const;

    // Positions of triples whose head (tail) is `e`, ascending.
    std::span<const std::uint32_t> head_positions(EntityId e) const noexcept;
    std::span<const std::uint32_t> tail_positions(EntityId e) const noexcept;

    std::size_t duplicates_dropped() const noexcept { return duplicates_dropped_; }

    // Resolves a string triple against the vocabulary; nullopt if any part is unknown.
    std::optional<Triple> resolve(std::string_view h, std::string_view r, std::string_view t) const;

private:
    std::shared_ptr<Vocabulary> vocab_;
    SplitTag split_ = SplitTag::Train;
    std::vector<Triple> triples_;
    std::vector<EntityId> entities_;
    std::vector<RelationId> relations_;
    std::vector<std::uint32_t> head_offsets_;
    std::vector<std::uint32_t> head_index_;
    std::vector<std::uint32_t> tail_offsets_;
    std::vector<std::uint32_t> tail_index_;
    std::size_t duplicates_dropped_ = 0;
};

class KnowledgeGraph::Builder {
public:
    explicit Builder(std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>(),
                     SplitTag split = SplitTag::Train);

    // Returns false when the triple was already present.
    bool add(std::string_view head, std::string_view relation, std::string_view tail);
    bool add(const Triple& t);

    std::size_t size() const noexcept { return triples_.size(); }
    KnowledgeGraph build() &&;

private:
    std::shared_ptr<Vocabulary> vocab_;
    SplitTag split_;
    std::vector<Triple> triples_;
    std::unordered_set<Triple, TripleHash> seen_;
    std::size_t duplicates_ = 0;
};

// Parses one or more triple files into a single graph. Duplicates are dropped (counted and
// logged as a warning); first-occurrence order is preserved.
KnowledgeGraph ingest_triples(std::span<const std::string> paths, TripleDialect dialect,
                              std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>(),
                              SplitTag split = SplitTag::Train);
KnowledgeGraph ingest_triples(const std::string& path, TripleDialect dialect,
                              std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>(),
                              SplitTag split = SplitTag::Train);

// Throws NotFound if the entity is unknown to the vocabulary. An entity the vocabulary knows but
// that has no incident triple in this graph yields an empty list. A self-loop is reported once
// per direction.
std::vector<Adjacency> adjacent(EntityId entity, const KnowledgeGraph& graph);

// Union over graphs of t such that (head, relation, t) is present. Sorted by id.
std::vector<EntityId> known_tails(EntityId head, RelationId relation,
                                  std::span<const KnowledgeGraph* const> graphs);
// Union over graphs of h such that (h, relation, tail) is present. Sorted by id.
std::vector<EntityId> known_heads(EntityId tail, RelationId relation,
                                  std::span<const KnowledgeGraph* const> graphs);

GraphStats stats(const KnowledgeGraph& graph);

// Union of graphs sharing one vocabulary, in argument order.
KnowledgeGraph merge(std::span<const KnowledgeGraph* const> graphs, SplitTag split);

void write_triples_tsv(const KnowledgeGraph& graph, const std::string& path);

// Binary snapshot: "KGNBSNAP" magic, u32 version, little-endian u32/u64 lengths.
void save_snapshot(const KnowledgeGraph& graph, const std::string& path);
KnowledgeGraph load_snapshot(const std::string& path,
                             std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>());

}  // namespace kgnbr
