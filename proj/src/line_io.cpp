#include "kgnbr/line_io.hpp"

#include "kgnbr/error.hpp"

#include <zlib.h>

#include <cerrno>
#include <cstring>

namespace kgnbr {

bool has_gz_suffix(std::string_view path) {
    return path.size() >= 3 && path.substr(path.size() - 3) == ".gz";
}

LineReader::LineReader(const std::string& path) : path_(path) {
    if (has_gz_suffix(path)) {
        gz_ = gzopen(path.c_str(), "rb");
        if (!gz_) throw io_error("cannot open " + path + ": " + std::strerror(errno));
        gzbuffer(static_cast<gzFile>(gz_), 1 << 17);
    } else {
        file_ = std::fopen(path.c_str(), "rb");
        if (!file_) throw io_error("cannot open " + path + ": " + std::strerror(errno));
    }
}

LineReader::~LineReader() {
    if (gz_) gzclose(static_cast<gzFile>(gz_));
    if (file_) std::fclose(file_);
}

bool LineReader::next(std::string& line) {
    line.clear();
    char buf[8192];
    bool got_any = false;
    for (;;) {
        char* r = gz_ ? gzgets(static_cast<gzFile>(gz_), buf, sizeof buf)
                      : std::fgets(buf, sizeof buf, file_);
        if (!r) {
            if (gz_) {
                int err = 0;
                gzerror(static_cast<gzFile>(gz_), &err);
                if (err != Z_OK && err != Z_STREAM_END) throw io_error("read error in " + path_);
            } else if (std::ferror(file_)) {
                throw io_error("read error in " + path_);
            }
            break;
        }
        got_any = true;
        std::size_t n = std::strlen(buf);
        line.append(buf, n);
        if (n > 0 && buf[n - 1] == '\n') break;
    }
    if (!got_any) return false;
    if (!line.empty() && line.back() == '\n') line.pop_back();
    if (!line.empty() && line.back() == '\r') line.pop_back();
    ++line_no_;
    return true;
}

LineWriter::LineWriter(const std::string& path) : path_(path) {
    if (has_gz_suffix(path)) {
        gz_ = gzopen(path.c_str(), "wb");
        if (!gz_) throw io_error("cannot create " + path + ": " + std::strerror(errno));
    } else {
        file_ = std::fopen(path.c_str(), "wb");
        if (!file_) throw io_error("cannot create " + path + ": " + std::strerror(errno));
    }
}

LineWriter::~LineWriter() {
    try {
        close();
    } catch (...) {
    }
}

void LineWriter::write(std::string_view bytes) {
    if (bytes.empty()) return;
    if (gz_) {
        if (gzwrite(static_cast<gzFile>(gz_), bytes.data(), static_cast<unsigned>(bytes.size())) !=
            static_cast<int>(bytes.size()))
            throw io_error("write error in " + path_);
    } else if (file_) {
        if (std::fwrite(bytes.data(), 1, bytes.size(), file_) != bytes.size())
            throw io_error("write error in " + path_);
    } else {
        throw io_error("write to closed file " + path_);
    }
}

void LineWriter::write_line(std::string_view line) {
    write(line);
    write("\n");
}

void LineWriter::close() {
    if (gz_) {
        int rc = gzclose(static_cast<gzFile>(gz_));
        gz_ = nullptr;
        if (rc != Z_OK) throw io_error("close failed for " + path_);
    }
    if (file_) {
        int rc = std::fclose(file_);
        file_ = nullptr;
        if (rc != 0) throw io_error("close failed for " + path_);
    }
}

}  // namespace kgnbr
