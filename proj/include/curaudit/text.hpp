// Copyright 2026 The curaudit Authors
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

#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "curaudit/core.hpp"
#include "curaudit/csv.hpp"
#include "curaudit/stopwords.hpp"

namespace curaudit {

// Headline tokenization: ASCII-lowercased, punctuation mapped to spaces
// except intra-word apostrophes and hyphens (so "ocasio-cortez" and
// "that'll" stay whole), whitespace-split, stopwords removed. Curly quotes
// and en/em dashes are folded to their ASCII forms first; other non-ASCII
// bytes pass through as word characters.
inline std::vector<std::string> normalize_headline(std::string_view text,
                                                   const std::set<std::string>& stopwords) {
  std::string buf;
  buf.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (c < 0x80) {
      if (std::isalnum(c)) {
        buf += static_cast<char>(std::tolower(c));
      } else if (c == '\'' || c == '-') {
        buf += static_cast<char>(c);
      } else {
        buf += ' ';
      }
      ++i;
      continue;
    }
    if (c == 0xE2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80) {
      unsigned char b3 = static_cast<unsigned char>(text[i + 2]);
      if (b3 == 0x98 || b3 == 0x99) buf += '\'';        // curly single quotes
      else if (b3 == 0x9C || b3 == 0x9D) buf += ' ';    // curly double quotes
      else if (b3 == 0x93 || b3 == 0x94) buf += '-';    // en/em dash
      else { buf.append(text.substr(i, 3)); }
      i += 3;
      continue;
    }
    buf += static_cast<char>(c);
    ++i;
  }

  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start <= buf.size()) {
    std::size_t sp = buf.find(' ', start);
    std::string_view tok = (sp == std::string::npos)
                               ? std::string_view(buf).substr(start)
                               : std::string_view(buf).substr(start, sp - start);
    while (!tok.empty() && (tok.front() == '\'' || tok.front() == '-')) tok.remove_prefix(1);
    while (!tok.empty() && (tok.back() == '\'' || tok.back() == '-')) tok.remove_suffix(1);
    if (!tok.empty() && !stopwords.count(std::string(tok))) {
      tokens.emplace_back(tok);
    }
    if (sp == std::string::npos) break;
    start = sp + 1;
  }
  return tokens;
}

inline std::vector<std::string> normalize_headline(std::string_view text) {
  return normalize_headline(text, default_stopwords());
}

// Contiguous n-token windows within one headline, n in {2,3}. Each n-gram is
// its tokens joined by one space (tokens never contain spaces).
inline std::vector<std::string> extract_ngrams(std::span<const std::string> tokens, int n) {
  if (n != 2 && n != 3) throw std::invalid_argument("n must be 2 or 3");
  std::vector<std::string> grams;
  if (tokens.size() < static_cast<std::size_t>(n)) return grams;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string g = tokens[i];
    for (int k = 1; k < n; ++k) {
      g += ' ';
      g += tokens[i + k];
    }
    grams.push_back(std::move(g));
  }
  return grams;
}

struct NgramTable {
  std::map<std::string, std::int64_t> counts;
  std::int64_t total = 0;

  void add(const std::string& gram) {
    counts[gram] += 1;
    total += 1;
  }
};

struct Corpus {
  std::vector<std::string> headlines;
  NgramTable bigrams;
  NgramTable trigrams;

  const NgramTable& table(int n) const { return n == 2 ? bigrams : trigrams; }

  static Corpus from_headlines(std::vector<std::string> headlines,
                               const std::set<std::string>& stopwords = default_stopwords()) {
    Corpus c;
    c.headlines = std::move(headlines);
    for (const std::string& h : c.headlines) {
      std::vector<std::string> toks = normalize_headline(h, stopwords);
      for (std::string& g : extract_ngrams(toks, 2)) c.bigrams.add(g);
      for (std::string& g : extract_ngrams(toks, 3)) c.trigrams.add(g);
    }
    return c;
  }

  // Each distinct story's headline counts once, however often it reappears.
  static Corpus from_log(const ObservationLog& log,
                         const std::set<std::string>& stopwords = default_stopwords()) {
    std::set<std::string> seen;
    std::vector<std::string> headlines;
    for (const Snapshot& snap : log.snapshots) {
      for (const StoryRef& st : snap.stories) {
        if (seen.insert(story_key(st)).second) headlines.push_back(st.headline);
      }
    }
    return from_headlines(std::move(headlines), stopwords);
  }
};

struct SalienceRow {
  std::string ngram;
  int n = 2;
  double log_ratio = 0.0;  // base 2
  std::int64_t count_a = 0;
  std::int64_t count_b = 0;
};

// Log-ratio keyness of corpus a relative to corpus b. For each n-gram with
// count_a >= min_count:
//   log2( (c_a + s)/(T_a + s*V)  /  (c_b + s)/(T_b + s*V) )
// where V is the joint vocabulary size for that n and s the smoothing
// constant (0.5 by default, so zero-count cross-corpus n-grams stay finite).
// Bigrams and trigrams are ranked together in one table.
inline std::vector<SalienceRow> log_ratio_salience(const Corpus& a, const Corpus& b,
                                                   std::int64_t min_count = 1,
                                                   double smoothing = 0.5) {
  if (a.headlines.empty() || b.headlines.empty()) {
    throw std::invalid_argument("empty corpus");
  }
  std::vector<SalienceRow> rows;
  for (int n : {2, 3}) {
    const NgramTable& ta = a.table(n);
    const NgramTable& tb = b.table(n);
    std::set<std::string> vocab;
    for (const auto& [g, c] : ta.counts) vocab.insert(g);
    for (const auto& [g, c] : tb.counts) vocab.insert(g);
    const double v = static_cast<double>(vocab.size());
    const double denom_a = static_cast<double>(ta.total) + smoothing * v;
    const double denom_b = static_cast<double>(tb.total) + smoothing * v;
    for (const auto& [gram, ca] : ta.counts) {
      if (ca < min_count) continue;
      auto it = tb.counts.find(gram);
      std::int64_t cb = it == tb.counts.end() ? 0 : it->second;
      double pa = (static_cast<double>(ca) + smoothing) / denom_a;
      double pb = (static_cast<double>(cb) + smoothing) / denom_b;
      SalienceRow row;
      row.ngram = gram;
      row.n = n;
      row.count_a = ca;
      row.count_b = cb;
      row.log_ratio = std::log2(pa / pb);
      rows.push_back(std::move(row));
    }
  }
  std::sort(rows.begin(), rows.end(), [](const SalienceRow& x, const SalienceRow& y) {
    if (x.log_ratio != y.log_ratio) return x.log_ratio > y.log_ratio;
    if (x.count_a != y.count_a) return x.count_a > y.count_a;
    return x.ngram < y.ngram;
  });
  return rows;
}

inline std::string salience_to_csv(std::span<const SalienceRow> rows) {
  std::string out = "ngram,n,log_ratio,count_a,count_b\n";
  char num[64];
  for (const SalienceRow& r : rows) {
    std::snprintf(num, sizeof(num), "%.6f", r.log_ratio);
    out += csv_join({r.ngram, std::to_string(r.n), num,
                     std::to_string(r.count_a), std::to_string(r.count_b)});
  }
  return out;
}

}  // namespace curaudit
