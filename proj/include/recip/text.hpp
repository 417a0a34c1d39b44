/*
 * text.hpp
 *
 * Post text normalization for vocabulary statistics:
 *   1. invalid UTF-8 bytes become U+FFFD
 *   2. @mentions and URLs (scheme://... or www....) are removed
 *   3. emoji and other symbols are removed; apostrophes survive only between
 *      word characters, '#' only in front of one
 *   4. lowercase, split on whitespace, drop stopwords
 *
 * "Word character" means an ASCII letter or digit, a non-ASCII code point
 * below U+2000 other than Latin-1 punctuation, or a CJK / kana / Hangul code
 * point. This is an approximation of Unicode alphanumerics without ICU.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace recip {

namespace detail {

inline constexpr char32_t kReplacementChar = 0xFFFD;

inline std::u32string decode_utf8_lossy(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 0;
    char32_t cp = 0;
    if (b0 < 0x80) {
      out.push_back(b0);
      ++i;
      continue;
    } else if ((b0 & 0xE0) == 0xC0) {
      len = 2;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      len = 3;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      len = 4;
      cp = b0 & 0x07;
    } else {
      out.push_back(kReplacementChar);
      ++i;
      continue;
    }
    bool ok = i + len <= s.size();
    for (std::size_t k = 1; ok && k < len; ++k) {
      const auto b = static_cast<unsigned char>(s[i + k]);
      if ((b & 0xC0) != 0x80)
        ok = false;
      else
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    if (ok) {
      static constexpr char32_t kMin[] = {0, 0, 0x80, 0x800, 0x10000};
      ok = cp >= kMin[len] && cp <= 0x10FFFF && !(cp >= 0xD800 && cp <= 0xDFFF);
    }
    if (!ok) {
      out.push_back(kReplacementChar);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' || c == 0x85 ||
         c == 0xA0 || (c >= 0x2000 && c <= 0x200A) || c == 0x2028 || c == 0x2029 || c == 0x202F ||
         c == 0x205F || c == 0x3000;
}

inline bool is_word_char(char32_t c) {
  if (c < 0x80) return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
  if (c < 0xC0) return c == 0xAA || c == 0xB5 || c == 0xBA;
  if (c == 0xD7 || c == 0xF7) return false;
  if (c < 0x2000) return !is_space(c);
  return (c >= 0x3040 && c <= 0x30FF) || (c >= 0x3400 && c <= 0x4DBF) || (c >= 0x4E00 && c <= 0x9FFF) ||
         (c >= 0xAC00 && c <= 0xD7AF);
}

inline char32_t to_lower(char32_t c) {
  if (c >= 'A' && c <= 'Z') return c + 32;
  if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
  return c;
}

inline bool is_mention_char(char32_t c) {
  return (c < 0x80 && is_word_char(c)) || c == '_';
}

inline bool is_scheme_char(char32_t c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '+' ||
         c == '-' || c == '.';
}

inline bool starts_with_ci(const std::u32string& s, std::size_t at, std::string_view prefix) {
  if (at + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k)
    if (to_lower(s[at + k]) != static_cast<char32_t>(prefix[k])) return false;
  return true;
}

// Length of a URL starting at `at`, or 0.
inline std::size_t url_length(const std::u32string& s, std::size_t at) {
  std::size_t end = at;
  if (starts_with_ci(s, at, "www.")) {
    end = at + 4;
  } else {
    std::size_t k = at;
    if (k >= s.size() || !((s[k] >= 'a' && s[k] <= 'z') || (s[k] >= 'A' && s[k] <= 'Z'))) return 0;
    while (k < s.size() && is_scheme_char(s[k])) ++k;
    if (!(k + 2 < s.size() && s[k] == ':' && s[k + 1] == '/' && s[k + 2] == '/')) return 0;
    end = k + 3;
  }
  while (end < s.size() && !is_space(s[end])) ++end;
  return end - at;
}

}  // namespace detail

struct TextOptions {
  /// Tokens beginning with '#' are kept; when false they are dropped.
  bool keep_hashtags{true};
};

using StopwordSet = std::unordered_set<std::string>;

/// One word per line; '#' starts a comment line. Words are lowercased.
inline StopwordSet read_stopwords(std::istream& in) {
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
    std::size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos || line[start] == '#') continue;
    std::string w;
    for (char32_t c : detail::decode_utf8_lossy(std::string_view(line).substr(start)))
      detail::append_utf8(w, detail::to_lower(c));
    words.insert(std::move(w));
  }
  return words;
}

inline std::vector<std::string> preprocess_text(std::string_view raw, const StopwordSet& stopwords = {},
                                                const TextOptions& opts = {}) {
  const std::u32string in = detail::decode_utf8_lossy(raw);

  // Pass 1: remove mentions and URLs, which must start at a token boundary.
  std::u32string kept;
  kept.reserve(in.size());
  for (std::size_t i = 0; i < in.size();) {
    const bool boundary = i == 0 || detail::is_space(in[i - 1]) || !detail::is_word_char(in[i - 1]);
    if (boundary && in[i] == '@' && i + 1 < in.size() && detail::is_mention_char(in[i + 1])) {
      ++i;
      while (i < in.size() && detail::is_mention_char(in[i])) ++i;
      kept.push_back(' ');
      continue;
    }
    if (boundary) {
      if (const std::size_t n = detail::url_length(in, i)) {
        i += n;
        kept.push_back(' ');
        continue;
      }
    }
    kept.push_back(in[i]);
    ++i;
  }

  // Pass 2: symbol stripping and lowercasing.
  std::u32string clean;
  clean.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    char32_t c = kept[i];
    if (c == 0x2019) c = '\'';
    const bool prev_word = i > 0 && detail::is_word_char(kept[i - 1]);
    const bool next_word = i + 1 < kept.size() && detail::is_word_char(kept[i + 1]);
    if (detail::is_word_char(c)) {
      clean.push_back(detail::to_lower(c));
    } else if (c == '\'' && prev_word && next_word) {
      clean.push_back('\'');
    } else if (c == '#' && next_word && !prev_word) {
      clean.push_back(' ');
      clean.push_back('#');
    } else {
      clean.push_back(' ');
    }
  }

  std::vector<std::string> tokens;
  std::string tok;
  auto emit = [&] {
    if (tok.empty()) return;
    const bool hashtag = tok.front() == '#';
    if (!(hashtag && !opts.keep_hashtags) && !stopwords.contains(tok)) tokens.push_back(tok);
    tok.clear();
  };
  for (char32_t c : clean) {
    if (c == ' ') {
      emit();
    } else {
      detail::append_utf8(tok, c);
    }
  }
  emit();
  return tokens;
}

}  // namespace recip
