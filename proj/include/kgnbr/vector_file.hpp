#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace kgnbr {

// Dense row-major vectors keyed by identifier, in file order.
struct VectorTable {
    std::size_t dim = 0;
    std::vector<std::string> keys;
    std::vector<double> values;  // keys.size() * dim
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t size() const noexcept { return keys.size(); }
    std::span<const double> row(std::size_t i) const {
        return std::span(values).subspan(i * dim, dim);
    }
    const std::uint32_t* find(std::string_view key) const;
};

// Word-vector text format: header `count dim`, then `key v1 ... v_dim` per line. Throws
// ParseError on dimension or count mismatch, zero dim, and non-finite components.
VectorTable load_vector_table(const std::string& path);

void write_vector_table(const VectorTable& table, const std::string& path);

// FNV-1a over keys and the raw bytes of the values.
std::uint64_t checksum(const VectorTable& table);

}  // namespace kgnbr
