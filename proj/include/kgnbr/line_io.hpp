#pragma once

#include <cstdio>
#include <memory>
#include <string>
#include <string_view>

namespace kgnbr {

// Reads '\n'-terminated lines from plain or gzip-compressed files (detected by the ".gz"
// suffix). A trailing '\r' is dropped so CRLF files parse like LF files.
class LineReader {
public:
    explicit LineReader(const std::string& path);
    ~LineReader();
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line);
    std::size_t line_number() const noexcept { return line_no_; }
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
    std::FILE* file_ = nullptr;
    void* gz_ = nullptr;
    std::size_t line_no_ = 0;
};

class LineWriter {
public:
    explicit LineWriter(const std::string& path);
    ~LineWriter();
    LineWriter(const LineWriter&) = delete;
    LineWriter& operator=(const LineWriter&) = delete;

    void write_line(std::string_view line);
    void close();

private:
    void write(std::string_view bytes);

    std::string path_;
    std::FILE* file_ = nullptr;
    void* gz_ = nullptr;
};

bool has_gz_suffix(std::string_view path);

}  // namespace kgnbr
