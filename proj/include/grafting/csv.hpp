#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace grafting {

// Deterministic CSV assembly: fixed %.17g formatting, '\n' line ends, no
// locale dependence.  Experiments build the whole table in memory and the
// caller decides where it goes, so repeated runs with one seed are
// byte-identical.
class Csv {
 public:
  explicit Csv(std::vector<std::string> header) {
    append_row_strings(header);
  }

  static std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
  static std::string num(long long v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%lld", v);
    return buf;
  }

  void row(const std::vector<std::string>& cells) { append_row_strings(cells); }

  const std::string& text() const { return text_; }

 private:
  void append_row_strings(const std::vector<std::string>& cells) {
    for (size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  std::string text_;
};

}  // namespace grafting
