#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace habit {

/// Malformed trace content; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
  ParseError(std::size_t line, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Parses trace text: one sequence per line, tokens separated by single
/// spaces. Blank (or whitespace-only) lines are ignored, as are comment
/// lines, which start with "//" — a leading '#' is an ordinary token, so
/// menu-style names like "#11" stay usable. Throws ParseError.
std::vector<std::vector<std::string>> parse_trace(std::string_view text);

}  // namespace habit
