#ifndef WALKMAX_CSV_HPP
#define WALKMAX_CSV_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <system_error>

#include "walkmax/errors.hpp"

namespace walkmax::io {

inline std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Locale-independent float formatting, 17 significant digits.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

// CSV accumulated in memory, then written in one shot; content hash comes for
// free and writes are all-or-nothing.
class CsvWriter {
  public:
    explicit CsvWriter(std::string header) { body_ = std::move(header) += '\n'; }

    CsvWriter& field(double v) { return raw(format_double(v)); }
    CsvWriter& field(std::uint64_t v) { return raw(std::to_string(v)); }
    CsvWriter& field(int v) { return raw(std::to_string(v)); }
    CsvWriter& field(const std::string& v) { return raw(v); }
    void end_row() {
        body_ += '\n';
        row_open_ = false;
    }

    const std::string& content() const { return body_; }
    std::uint64_t hash() const { return fnv1a64(body_); }

    std::uint64_t write(const std::filesystem::path& path) const {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericError("cannot open output file: " + path.string());
        out << body_;
        if (!out) throw NumericError("write failed: " + path.string());
        return hash();
    }

  private:
    CsvWriter& raw(const std::string& v) {
        if (row_open_) body_ += ',';
        body_ += v;
        row_open_ = true;
        return *this;
    }
    std::string body_;
    bool row_open_ = false;
};

inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& content) {
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw NumericError("cannot open output file: " + tmp);
        out << content;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw NumericError("atomic rename failed: " + path.string());
}

} // namespace walkmax::io

#endif
