#include "kgnbr/vector_file.hpp"

#include "kgnbr/error.hpp"
#include "kgnbr/line_io.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <fmt/format.h>

namespace kgnbr {

const std::uint32_t* VectorTable::find(std::string_view key) const {
    auto it = index.find(std::string(key));
    return it == index.end() ? nullptr : &it->second;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

VectorTable load_vector_table(const std::string& path) {
    LineReader reader(path);
    std::string line;
    if (!reader.next(line)) throw ParseError(path, 1, "missing `count dim` header");
    auto header = tokens(line);
    std::size_t count = 0, dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim))
        throw ParseError(path, reader.line_number(), "header must be `count dim`");
    if (dim == 0) throw ParseError(path, reader.line_number(), "vector dimension must be positive");

    VectorTable table;
    table.dim = dim;
    table.keys.reserve(count);
    table.values.reserve(count * dim);
    while (reader.next(line)) {
        auto f = tokens(line);
        if (f.empty()) continue;
        if (f.size() != dim + 1)
            throw ParseError(path, reader.line_number(),
                             fmt::format("expected {} components, found {}", dim, f.size() - 1));
        if (table.keys.size() == count)
            throw ParseError(path, reader.line_number(),
                             fmt::format("more vectors than the declared count {}", count));
        for (std::size_t i = 1; i <= dim; ++i) {
            double v;
            if (!parse_number(f[i], v) || !std::isfinite(v))
                throw ParseError(path, reader.line_number(),
                                 "bad component '" + std::string(f[i]) + "'");
            table.values.push_back(v);
        }
        std::string key(f[0]);
        if (!table.index.emplace(key, static_cast<std::uint32_t>(table.keys.size())).second)
            throw ParseError(path, reader.line_number(), "duplicate key '" + key + "'");
        table.keys.push_back(std::move(key));
    }
    if (table.keys.size() != count)
        throw ParseError(path, reader.line_number(),
                         fmt::format("header declares {} vectors, file has {}", count,
                                     table.keys.size()));
    return table;
}

void write_vector_table(const VectorTable& table, const std::string& path) {
    LineWriter out(path);
    out.write_line(fmt::format("{} {}", table.size(), table.dim));
    std::string line;
    for (std::size_t i = 0; i < table.size(); ++i) {
        line = table.keys[i];
        for (double v : table.row(i)) line += fmt::format(" {}", v);
        out.write_line(line);
    }
    out.close();
}

std::uint64_t checksum(const VectorTable& table) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto mix = [&h](const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
    };
    std::uint64_t dim = table.dim;
    mix(&dim, sizeof dim);
    for (const auto& k : table.keys) {
        mix(k.data(), k.size());
        mix("\n", 1);
    }
    mix(table.values.data(), table.values.size() * sizeof(double));
    return h;
}

}  // namespace kgnbr
