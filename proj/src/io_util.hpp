#pragma once

#include <cerrno>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "divpath/error.hpp"

namespace divpath::detail {

/// Whitespace tokenizer that drops '#' comments, for the Triangle and OFF
/// text formats.
class TokenReader {
 public:
  explicit TokenReader(const std::filesystem::path& path) : path_(path.string()) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path_);
    std::ostringstream os;
    os << in.rdbuf();
    text_ = os.str();
  }

  std::string next_word(const char* what) {
    skip_space();
    if (pos_ >= text_.size()) throw Error(ErrorCode::Parse, path_ + ": unexpected end of file reading " + what);
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
           text_[pos_] != '#') {
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  long next_int(const char* what) {
    const std::string w = next_word(what);
    long value = 0;
    const auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), value);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      throw Error(ErrorCode::Parse, path_ + ": expected integer " + what + ", got '" + w + "'");
    }
    return value;
  }

  double next_double(const char* what) {
    const std::string w = next_word(what);
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || errno == ERANGE) {
      throw Error(ErrorCode::Parse, path_ + ": expected number " + what + ", got '" + w + "'");
    }
    return value;
  }

  /// Discards the rest of the current line.
  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '#') {
        skip_line();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string path_;
  std::string text_;
  std::size_t pos_ = 0;
};

/// Writes through a sibling temporary and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw Error(ErrorCode::Io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + " to " + path.string());
}

}  // namespace divpath::detail
