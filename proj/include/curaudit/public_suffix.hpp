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

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace curaudit {

// Bundled snapshot of public-suffix rules, pinned so registrable-domain
// extraction is deterministic and runs without network. The format follows
// the Public Suffix List: plain rules, "*." wildcard rules, "!" exceptions.
inline const std::vector<std::string>& default_suffix_rules() {
  static const std::vector<std::string> rules = {
      "com", "org", "net", "edu", "gov", "mil", "int", "info", "biz",
      "name", "pro", "io", "co", "me", "tv", "cc", "ws", "app", "dev",
      "news", "blog", "online", "site", "xyz", "example", "test", "local",
      "us", "uk", "co.uk", "org.uk", "ac.uk", "gov.uk", "net.uk", "me.uk",
      "au", "com.au", "net.au", "org.au", "edu.au", "gov.au",
      "ca", "de", "fr", "it", "nl", "es", "se", "no", "dk", "fi", "pl",
      "ch", "at", "be", "ie", "pt", "gr", "cz", "ru", "ua", "tr",
      "jp", "co.jp", "ne.jp", "or.jp", "ac.jp", "go.jp",
      "cn", "com.cn", "net.cn", "org.cn", "gov.cn",
      "in", "co.in", "net.in", "org.in",
      "br", "com.br", "net.br", "org.br",
      "mx", "com.mx", "kr", "co.kr", "nz", "co.nz", "org.nz",
      "za", "co.za", "ar", "com.ar", "sg", "com.sg", "hk", "com.hk",
      "*.ck", "!www.ck",
  };
  return rules;
}

class PublicSuffixList {
 public:
  PublicSuffixList() : PublicSuffixList(default_suffix_rules()) {}

  explicit PublicSuffixList(const std::vector<std::string>& rules) {
    for (const std::string& raw : rules) add_rule(raw);
  }

  // Loads one rule per line; blank lines and "//" comments are skipped.
  static PublicSuffixList from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open suffix list: " + path);
    std::vector<std::string> rules;
    std::string line;
    while (std::getline(in, line)) {
      while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
      if (line.empty() || line.rfind("//", 0) == 0) continue;
      rules.push_back(line);
    }
    return PublicSuffixList(rules);
  }

  // Longest matching public suffix of `host`; exception rules beat wildcard
  // rules; an unlisted TLD falls back to the last label.
  std::string public_suffix(std::string_view host) const {
    std::vector<std::string> labels = split_labels(lower(host));
    if (labels.empty()) return "";
    for (std::size_t i = 0; i < labels.size(); ++i) {
      std::string cand = join_labels(labels, i);
      if (exceptions_.count(cand)) return join_labels(labels, i + 1);
      if (plain_.count(cand)) return cand;
      if (i + 1 < labels.size() && wildcard_.count(join_labels(labels, i + 1))) return cand;
    }
    return labels.back();
  }

  // Public suffix plus one label, e.g. "edition.cnn.com" -> "cnn.com".
  // Returns "" when the host itself is a public suffix.
  std::string registrable_domain(std::string_view host) const {
    std::string h = lower(host);
    std::string suffix = public_suffix(h);
    if (suffix.empty() || h == suffix) return "";
    std::string_view prefix(h.data(), h.size() - suffix.size());
    if (prefix.empty() || prefix.back() != '.') return "";
    prefix.remove_suffix(1);
    std::size_t dot = prefix.rfind('.');
    std::string label = (dot == std::string_view::npos)
                            ? std::string(prefix)
                            : std::string(prefix.substr(dot + 1));
    if (label.empty()) return "";
    return label + "." + suffix;
  }

 private:
  void add_rule(std::string_view raw) {
    std::string rule = lower(raw);
    if (rule.empty()) return;
    if (rule[0] == '!') {
      exceptions_.insert(rule.substr(1));
    } else if (rule.rfind("*.", 0) == 0) {
      wildcard_.insert(rule.substr(2));
    } else {
      plain_.insert(rule);
    }
  }

  static std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    while (!out.empty() && out.back() == '.') out.pop_back();
    return out;
  }

  static std::vector<std::string> split_labels(const std::string& host) {
    std::vector<std::string> labels;
    std::size_t start = 0;
    while (start <= host.size()) {
      std::size_t dot = host.find('.', start);
      if (dot == std::string::npos) {
        if (start < host.size()) labels.push_back(host.substr(start));
        break;
      }
      labels.push_back(host.substr(start, dot - start));
      start = dot + 1;
    }
    return labels;
  }

  static std::string join_labels(const std::vector<std::string>& labels, std::size_t from) {
    std::string out;
    for (std::size_t i = from; i < labels.size(); ++i) {
      if (!out.empty()) out += '.';
      out += labels[i];
    }
    return out;
  }

  std::set<std::string> plain_, wildcard_, exceptions_;
};

// Host component of an absolute URL, lowercased, without userinfo or port.
inline std::string url_host(std::string_view url) {
  std::string_view rest = url;
  std::size_t scheme = rest.find("://");
  if (scheme != std::string_view::npos) {
    rest.remove_prefix(scheme + 3);
  } else if (rest.rfind("//", 0) == 0) {
    rest.remove_prefix(2);
  }
  std::size_t end = rest.find_first_of("/?#");
  if (end != std::string_view::npos) rest = rest.substr(0, end);
  std::size_t at = rest.rfind('@');
  if (at != std::string_view::npos) rest.remove_prefix(at + 1);
  std::size_t colon = rest.find(':');
  if (colon != std::string_view::npos) rest = rest.substr(0, colon);
  std::string host(rest);
  std::transform(host.begin(), host.end(), host.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  while (!host.empty() && host.back() == '.') host.pop_back();
  return host;
}

inline std::string registrable_domain_of_url(std::string_view url, const PublicSuffixList& psl) {
  std::string host = url_host(url);
  if (host.empty()) return "";
  std::string reg = psl.registrable_domain(host);
  return reg.empty() ? host : reg;
}

}  // namespace curaudit
