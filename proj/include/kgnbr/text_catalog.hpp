#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgnbr {

// Labels and optional descriptions keyed by raw identifier (e.g. Wikidata Q/P ids), in file
// order. Label text is stored NFC-normalized and trimmed.
struct RawCatalog {
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::string> labels;
    std::unordered_map<std::string, std::string> descriptions;
};

// Label files are `id<TAB>label[<TAB>alias...]`; only the first label is used. Description
// files are `id<TAB>text`; descriptions for unknown ids are ignored with a warning.
RawCatalog load_raw(const std::string& labels_path,
                    const std::optional<std::string>& descriptions_path = std::nullopt);

enum class DisambiguationMode {
    DescriptionThenId,  // colliding labels get " <description>", then " <id>" if still colliding
    IdOnly,             // colliding labels get " <id>"
};

// Injective id -> text mapping for entities, plus distinct relation texts.
class TextCatalog {
public:
    TextCatalog() = default;
    // Validates injectivity of entities and distinctness of relations.
    TextCatalog(std::unordered_map<std::string, std::string> entity_text,
                std::unordered_map<std::string, std::string> relation_text);

    // Throws NotFound naming the id.
    const std::string& entity_text(std::string_view id) const;
    const std::string& relation_text(std::string_view id) const;
    const std::string* find_entity_text(std::string_view id) const;
    const std::string* find_relation_text(std::string_view id) const;

    // Exact reverse lookup; nullptr when the text names no entity.
    const std::string* entity_for_text(std::string_view text) const;

    std::size_t entity_count() const noexcept { return entity_text_.size(); }
    std::size_t relation_count() const noexcept { return relation_text_.size(); }
    const std::unordered_map<std::string, std::string>& entities() const noexcept {
        return entity_text_;
    }
    const std::unordered_map<std::string, std::string>& relations() const noexcept {
        return relation_text_;
    }
    // Relation texts, longest first (used to split "relation entity" neighbor strings).
    const std::vector<std::string>& relation_texts_by_length() const noexcept {
        return relation_by_length_;
    }

private:
    std::unordered_map<std::string, std::string> entity_text_;
    std::unordered_map<std::string, std::string> relation_text_;
    std::unordered_map<std::string, std::string> reverse_;
    std::vector<std::string> relation_by_length_;
};

// Makes entity texts injective. Globally unique labels pass through unchanged. Relation label
// collisions are a hard error.
TextCatalog disambiguate(const RawCatalog& entities, const RawCatalog& relations,
                         DisambiguationMode mode = DisambiguationMode::DescriptionThenId);

// `id<TAB>text` audit dump, entities then relations, each sorted by id.
void write_catalog_tsv(const TextCatalog& catalog, const std::string& path);

}  // namespace kgnbr
