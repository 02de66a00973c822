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

#include "curaudit/public_suffix.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

namespace curaudit {
namespace {

TEST(PublicSuffixTest, SubdomainsAggregateToRegistrableDomain) {
  PublicSuffixList psl;
  EXPECT_EQ(psl.registrable_domain("edition.cnn.com"), "cnn.com");
  EXPECT_EQ(psl.registrable_domain("cnn.com"), "cnn.com");
  EXPECT_EQ(psl.registrable_domain("www.a.b.cnn.com"), "cnn.com");
}

TEST(PublicSuffixTest, MultiLabelSuffixes) {
  PublicSuffixList psl;
  EXPECT_EQ(psl.public_suffix("news.bbc.co.uk"), "co.uk");
  EXPECT_EQ(psl.registrable_domain("news.bbc.co.uk"), "bbc.co.uk");
  EXPECT_EQ(psl.registrable_domain("smh.com.au"), "smh.com.au");
}

TEST(PublicSuffixTest, BareSuffixHasNoRegistrableDomain) {
  PublicSuffixList psl;
  EXPECT_EQ(psl.registrable_domain("com"), "");
  EXPECT_EQ(psl.registrable_domain("co.uk"), "");
}

TEST(PublicSuffixTest, WildcardAndExceptionRules) {
  PublicSuffixList psl;
  // "*.ck" makes foo.ck a public suffix; "!www.ck" overrides.
  EXPECT_EQ(psl.public_suffix("bar.foo.ck"), "foo.ck");
  EXPECT_EQ(psl.registrable_domain("bar.foo.ck"), "bar.foo.ck");
  EXPECT_EQ(psl.public_suffix("www.ck"), "ck");
  EXPECT_EQ(psl.registrable_domain("www.ck"), "www.ck");
}

TEST(PublicSuffixTest, UnknownTldFallsBackToLastLabel) {
  PublicSuffixList psl;
  EXPECT_EQ(psl.registrable_domain("host.zzunknown"), "host.zzunknown");
}

TEST(PublicSuffixTest, CaseAndTrailingDotNormalized) {
  PublicSuffixList psl;
  EXPECT_EQ(psl.registrable_domain("WWW.CNN.COM."), "cnn.com");
}

TEST(UrlHostTest, ExtractsHostFromAbsoluteUrls) {
  EXPECT_EQ(url_host("https://edition.cnn.com/2019/story.html"), "edition.cnn.com");
  EXPECT_EQ(url_host("http://user:pw@example.com:8080/x?q=1"), "example.com");
  EXPECT_EQ(url_host("//cdn.example.org/asset"), "cdn.example.org");
  EXPECT_EQ(url_host("HTTPS://Example.COM"), "example.com");
}

TEST(UrlHostTest, RegistrableDomainOfUrl) {
  PublicSuffixList psl;
  EXPECT_EQ(registrable_domain_of_url("https://edition.cnn.com/story", psl), "cnn.com");
  EXPECT_EQ(registrable_domain_of_url("https://apple.news/Abc123", psl), "apple.news");
}

TEST(PublicSuffixTest, LoadsRulesFromFile) {
  std::string path = ::testing::TempDir() + "/psl_snapshot.txt";
  {
    std::ofstream out(path);
    out << "// comment line\n\ncom\nuk\nco.uk\n";
  }
  PublicSuffixList psl = PublicSuffixList::from_file(path);
  EXPECT_EQ(psl.registrable_domain("news.bbc.co.uk"), "bbc.co.uk");
  std::remove(path.c_str());
}

}  // namespace
}  // namespace curaudit
