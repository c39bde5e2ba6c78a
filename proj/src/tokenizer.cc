// Copyright 2026 The topicrate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "topicrate/corpus.h"

namespace topicrate {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Characters that always stand alone, wherever they occur in a chunk.
bool is_isolated(char c) {
  switch (c) {
    case ';': case '@': case '#': case '$': case '%': case '&':
    case '?': case '!': case '(': case ')': case '[': case ']':
    case '{': case '}': case '<': case '>': case '"': case '`':
      return true;
    default:
      return false;
  }
}

bool is_closing(std::string_view piece) {
  return piece == ")" || piece == "]" || piece == "}" || piece == "\"" ||
         piece == "'" || piece == ">";
}

constexpr std::array<std::string_view, 13> kAbbreviations = {
    "mr", "mrs", "ms", "dr", "st", "jr", "sr", "prof",
    "vs", "etc", "inc", "ltd", "co"};

bool keeps_period(std::string_view word) {
  // word excludes the trailing period.
  if (word.empty()) return false;
  if (word.find('.') != std::string_view::npos) return true;  // u.s. e.g.
  if (word.size() == 1 && word[0] >= 'a' && word[0] <= 'z') return true;
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

// Whole-word contractions that PTB splits without an apostrophe.
struct Split {
  std::string_view word, first, second;
};
constexpr std::array<Split, 6> kFusedContractions = {{
    {"cannot", "can", "not"},
    {"gimme", "gim", "me"},
    {"gonna", "gon", "na"},
    {"gotta", "got", "ta"},
    {"lemme", "lem", "me"},
    {"wanna", "wan", "na"},
}};

void emit_word(std::string_view word, std::vector<std::string>& out) {
  if (word.empty()) return;
  if (word.size() > 1 && word.front() == '\'' &&
      std::isalpha(static_cast<unsigned char>(word[1]))) {
    // Opening single quote, unless the whole word is a clitic.
    static constexpr std::array<std::string_view, 7> kClitics = {
        "'s", "'m", "'d", "'re", "'ve", "'ll", "'em"};
    if (std::find(kClitics.begin(), kClitics.end(), word) == kClitics.end()) {
      out.emplace_back("'");
      word.remove_prefix(1);
    }
  }
  for (const auto& f : kFusedContractions) {
    if (word == f.word) {
      out.emplace_back(f.first);
      out.emplace_back(f.second);
      return;
    }
  }
  auto ends_with = [&](std::string_view suffix) {
    return word.size() > suffix.size() && word.ends_with(suffix);
  };
  for (std::string_view suffix : {"n't", "'re", "'ve", "'ll", "'s", "'m",
                                   "'d"}) {
    if (ends_with(suffix)) {
      out.emplace_back(word.substr(0, word.size() - suffix.size()));
      out.emplace_back(suffix);
      return;
    }
  }
  if (word.size() > 1 && word.back() == '\'') {
    out.emplace_back(word.substr(0, word.size() - 1));
    out.emplace_back("'");
    return;
  }
  out.emplace_back(word);
}

void tokenize_chunk(std::string_view chunk, std::vector<std::string>& out) {
  // First pass: break the chunk into word pieces and standalone punctuation.
  std::vector<std::string> pieces;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) pieces.push_back(std::move(word));
    word.clear();
  };
  for (std::size_t i = 0; i < chunk.size(); ++i) {
    const char c = chunk[i];
    if (chunk.substr(i, 3) == "...") {
      flush();
      pieces.emplace_back("...");
      i += 2;
    } else if (chunk.substr(i, 2) == "--") {
      flush();
      pieces.emplace_back("--");
      i += 1;
    } else if (is_isolated(c)) {
      flush();
      pieces.emplace_back(c == '`' ? "'" : std::string(1, c));
    } else if ((c == ',' || c == ':') &&
               !(i + 1 < chunk.size() && is_digit(chunk[i + 1]))) {
      flush();
      pieces.emplace_back(1, c);
    } else {
      word.push_back(c);
    }
  }
  flush();

  // Second pass: trailing periods split off when only closing punctuation
  // follows them in the chunk, then clitics.
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::string_view piece = pieces[p];
    if (piece.size() > 1 && piece.back() == '.' && piece != "...") {
      const bool at_end = std::all_of(
          pieces.begin() + p + 1, pieces.end(),
          [](const std::string& s) { return is_closing(s); });
      std::string_view stem = piece.substr(0, piece.size() - 1);
      if (at_end && !keeps_period(stem)) {
        emit_word(stem, out);
        out.emplace_back(".");
        continue;
      }
    }
    if (piece.size() == 1 && !std::isalnum(static_cast<unsigned char>(
                                  piece[0]))) {
      out.emplace_back(piece);
      continue;
    }
    emit_word(piece, out);
  }
}

// Maps common non-ASCII punctuation to ASCII and lowercases ASCII letters.
std::string normalize(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (c == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      const auto third = static_cast<unsigned char>(text[i + 2]);
      std::string_view replacement;
      switch (third) {
        case 0x98: case 0x99: replacement = "'"; break;     // ‘ ’
        case 0x9C: case 0x9D: replacement = "\""; break;    // “ ”
        case 0x93: case 0x94: replacement = " -- "; break;  // en and em dash
        case 0xA6: replacement = "..."; break;              // …
        default: break;
      }
      if (!replacement.empty()) {
        s.append(replacement);
        i += 2;
        continue;
      }
    }
    s.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : text[i]);
  }
  return s;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  const std::string s = normalize(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) tokenize_chunk(std::string_view(s).substr(i, j - i), out);
    i = j;
  }
  return out;
}

bool is_punctuation(std::string_view token) {
  return std::none_of(token.begin(), token.end(), [](char c) {
    const auto u = static_cast<unsigned char>(c);
    return u >= 0x80 || std::isalnum(u);
  });
}

}  // namespace topicrate
