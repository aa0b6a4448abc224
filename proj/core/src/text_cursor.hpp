#pragma once

#include <cctype>
#include <charconv>
#include <optional>
#include <string>
#include <string_view>

#include "smoothck/error.hpp"

namespace smoothck::detail {

// Character cursor over one source line (or a whole formula) with position tracking.
class TextCursor {
 public:
  explicit TextCursor(std::string_view text, int line = 1) : text_(text), line_(line) {}

  bool eof() {
    skip_ws();
    return pos_ >= text_.size();
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  // Peek without skipping whitespace first.
  char peek_raw() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  bool consume(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  bool consume(std::string_view token) {
    skip_ws();
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c, std::string_view what) {
    if (!consume(c)) fail("expected " + std::string(what));
  }

  bool at_identifier() {
    const char c = peek();
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }

  bool at_number() {
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return true;
    return c == '.' && pos_ + 1 < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]));
  }

  std::string identifier() {
    if (!at_identifier()) fail("expected identifier");
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  // Decimal or scientific literal without sign.
  double number() {
    if (!at_number()) fail("expected number");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t probe = pos_ + 1;
      if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
      if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
        pos_ = probe;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    double value = 0.0;
    const auto token = text_.substr(start, pos_ - start);
    const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
    if (res.ec != std::errc{}) fail_at(start, "malformed number '" + std::string(token) + "'");
    return value;
  }

  std::size_t position() const { return pos_; }
  void reset(std::size_t pos) { pos_ = pos; }
  std::string_view rest() const { return text_.substr(pos_); }

  [[noreturn]] void fail(const std::string& message) {
    skip_ws();
    fail_at(pos_, message);
  }

  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw ParseError(message, line_, static_cast<int>(pos) + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace smoothck::detail
