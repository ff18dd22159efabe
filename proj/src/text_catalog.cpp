#include "kgnbr/text_catalog.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"
#include "kgnbr/unicode.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

namespace kgnbr {

namespace {

struct IdText {
    std::string_view id;
    std::string_view text;
};

IdText split_id_text(const std::string& line, const LineReader& reader, bool first_field_only) {
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
        throw ParseError(reader.path(), reader.line_number(), "expected id<TAB>text");
    std::string_view rest = std::string_view(line).substr(tab + 1);
    if (first_field_only) rest = rest.substr(0, rest.find('\t'));
    return {std::string_view(line).substr(0, tab), rest};
}

bool blank(std::string_view s) { return text::trim(s).empty(); }

}  // namespace

RawCatalog load_raw(const std::string& labels_path,
                    const std::optional<std::string>& descriptions_path) {
    RawCatalog raw;
    std::string line;
    {
        LineReader reader(labels_path);
        std::size_t duplicates = 0;
        while (reader.next(line)) {
            if (blank(line)) continue;
            auto [id, text_view] = split_id_text(line, reader, true);
            std::string label = text::canonical(text_view);
            if (label.empty())
                throw ParseError(labels_path, reader.line_number(), "empty label");
            std::string key(id);
            if (raw.labels.emplace(key, std::move(label)).second) {
                raw.ids.push_back(std::move(key));
            } else {
                ++duplicates;
            }
        }
        if (duplicates > 0)
            spdlog::warn("{}: {} repeated ids ignored (first label kept)", labels_path, duplicates);
    }
    if (descriptions_path) {
        LineReader reader(*descriptions_path);
        std::size_t unknown = 0;
        while (reader.next(line)) {
            if (blank(line)) continue;
            auto [id, text_view] = split_id_text(line, reader, false);
            std::string key(id);
            if (!raw.labels.contains(key)) {
                ++unknown;
                continue;
            }
            std::string desc = text::canonical(text_view);
            if (!desc.empty()) raw.descriptions.try_emplace(std::move(key), std::move(desc));
        }
        if (unknown > 0)
            spdlog::warn("{}: {} descriptions for unknown ids ignored", *descriptions_path,
                         unknown);
    }
    return raw;
}

TextCatalog::TextCatalog(std::unordered_map<std::string, std::string> entity_text,
                         std::unordered_map<std::string, std::string> relation_text)
    : entity_text_(std::move(entity_text)), relation_text_(std::move(relation_text)) {
    reverse_.reserve(entity_text_.size());
    for (const auto& [id, text] : entity_text_) {
        auto [it, inserted] = reverse_.emplace(text, id);
        if (!inserted)
            throw schema_error("entity text '" + text + "' is shared by " + it->second + " and " +
                               id);
    }
    std::unordered_map<std::string, std::string> seen;
    for (const auto& [id, text] : relation_text_) {
        auto [it, inserted] = seen.emplace(text, id);
        if (!inserted)
            throw schema_error("relation text '" + text + "' is shared by " + it->second +
                               " and " + id);
        relation_by_length_.push_back(text);
    }
    std::sort(relation_by_length_.begin(), relation_by_length_.end(),
              [](const std::string& a, const std::string& b) {
                  return a.size() != b.size() ? a.size() > b.size() : a < b;
              });
}

const std::string& TextCatalog::entity_text(std::string_view id) const {
    if (const auto* t = find_entity_text(id)) return *t;
    throw not_found("no text mapping for entity " + std::string(id));
}

const std::string& TextCatalog::relation_text(std::string_view id) const {
    if (const auto* t = find_relation_text(id)) return *t;
    throw not_found("no text mapping for relation " + std::string(id));
}

const std::string* TextCatalog::find_entity_text(std::string_view id) const {
    auto it = entity_text_.find(std::string(id));
    return it == entity_text_.end() ? nullptr : &it->second;
}

const std::string* TextCatalog::find_relation_text(std::string_view id) const {
    auto it = relation_text_.find(std::string(id));
    return it == relation_text_.end() ? nullptr : &it->second;
}

const std::string* TextCatalog::entity_for_text(std::string_view text) const {
    auto it = reverse_.find(std::string(text));
    return it == reverse_.end() ? nullptr : &it->second;
}

TextCatalog disambiguate(const RawCatalog& entities, const RawCatalog& relations,
                         DisambiguationMode mode) {
    std::unordered_map<std::string, std::size_t> label_count;
    for (const auto& id : entities.ids) ++label_count[entities.labels.at(id)];

    std::unordered_map<std::string, std::string> out;
    out.reserve(entities.ids.size());
    std::vector<const std::string*> colliding;
    for (const auto& id : entities.ids) {
        const auto& label = entities.labels.at(id);
        if (label_count[label] == 1) {
            out.emplace(id, label);
        } else {
            colliding.push_back(&id);
        }
    }

    if (mode == DisambiguationMode::IdOnly) {
        for (const auto* id : colliding) out.emplace(*id, entities.labels.at(*id) + " " + *id);
    } else {
        // Stage 1: label + description. Stage 2: anything still ambiguous gets the id.
        std::vector<std::pair<const std::string*, std::string>> staged;
        staged.reserve(colliding.size());
        std::unordered_map<std::string, std::size_t> text_count;
        for (const auto& [id, text] : out) ++text_count[text];
        for (const auto* id : colliding) {
            std::string text = entities.labels.at(*id);
            bool has_desc = false;
            if (auto d = entities.descriptions.find(*id); d != entities.descriptions.end()) {
                text += " ";
                text += d->second;
                has_desc = true;
            }
            ++text_count[text];
            staged.emplace_back(id, has_desc ? std::move(text) : std::string());
        }
        for (auto& [id, text] : staged) {
            if (text.empty()) {
                out.emplace(*id, entities.labels.at(*id) + " " + *id);
            } else if (text_count[text] > 1) {
                out.emplace(*id, text + " " + *id);
            } else {
                out.emplace(*id, std::move(text));
            }
        }
    }

    std::unordered_map<std::string, std::string> rel;
    for (const auto& id : relations.ids) rel.emplace(id, relations.labels.at(id));
    return TextCatalog(std::move(out), std::move(rel));
}

void write_catalog_tsv(const TextCatalog& catalog, const std::string& path) {
    LineWriter out(path);
    auto dump = [&](const std::unordered_map<std::string, std::string>& m) {
        std::vector<const std::pair<const std::string, std::string>*> rows;
        rows.reserve(m.size());
        for (const auto& kv : m) rows.push_back(&kv);
        std::sort(rows.begin(), rows.end(), [](auto* a, auto* b) { return a->first < b->first; });
        for (auto* kv : rows) out.write_line(kv->first + "\t" + kv->second);
    };
    dump(catalog.entities());
    dump(catalog.relations());
    out.close();
}

}  // namespace kgnbr
