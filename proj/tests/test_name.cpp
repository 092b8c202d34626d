#include "support.hpp"

#include <doctest.h>

using namespace test;

TEST_SUITE("namespace") {

TEST_CASE("parse the Alice example")
{
  auto n = parse_name("n2n://nriA:Alice.com/cell");
  CHECK(n.realm() == "nriA");
  CHECK(n.segments() == std::vector<std::string>{"Alice.com", "cell"});
  CHECK(parse_name("n2n://nrX:a/b/c").segments() == std::vector<std::string>{"a", "b", "c"});
  CHECK(Name::parse("n2n://nriA:Alice.com/cell") == n);
}

TEST_CASE("format")
{
  CHECK(format_name(Name("nriA", {"Alice.com", "cell"})) == "n2n://nriA:Alice.com/cell");
  CHECK(format_name(Name("r", {"x"})) == "n2n://r:x");
  CHECK(name_or_dash(Name()) == "-");
  CHECK(Name("nriA", {"Alice.com", "cell"}).to_fcn() == "nriA:Alice.com/cell");
}

TEST_CASE("malformed URIs")
{
  for (const char* bad : {"n2n://r1:", "n2n://:a", "http://r:a", "n2n://r:a//b", "n2n://r:a/", "n2n://r:a%20b",
                          "n2n://r_x:a", "n2n://r:a b", "n2n://r", "", "n2n://r:a/b?c"}) {
    CAPTURE(bad);
    try {
      parse_name(bad);
      FAIL("accepted");
    }
    catch (const Error& e) {
      CHECK(e.code() == Errc::MalformedUri);
    }
  }
  CHECK_THROWS_AS(Name("r", {}), Error);
  CHECK_THROWS_AS(Name("r", {std::string(kMaxSegmentBytes + 1, 'a')}), Error);
  CHECK_NOTHROW(Name("r", {std::string(kMaxSegmentBytes, 'a')}));
  CHECK_THROWS_AS(Name("r", std::vector<std::string>(kMaxSegments + 1, "a")), Error);
  CHECK_NOTHROW(Name("r", std::vector<std::string>(kMaxSegments, "a")));
}

TEST_CASE("round trip over generated names")
{
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    auto n = random_name(rng);
    auto text = format_name(n);
    REQUIRE(parse_name(text) == n);
    REQUIRE(format_name(parse_name(text)) == text);
  }
}

TEST_CASE("equality is byte-wise and case-sensitive")
{
  CHECK(parse_name("n2n://r:A") != parse_name("n2n://r:a"));
  CHECK(parse_name("n2n://R:a") != parse_name("n2n://r:a"));
}

TEST_CASE("prefix examples")
{
  CHECK(is_prefix_of(parse_name("n2n://r:a/b"), parse_name("n2n://r:a/b/c")));
  CHECK_FALSE(is_prefix_of(parse_name("n2n://r:a/b"), parse_name("n2n://s:a/b/c")));
  CHECK_FALSE(is_prefix_of(parse_name("n2n://r:a/b/c"), parse_name("n2n://r:a/b")));
}

TEST_CASE("prefix relation agrees with a sub-list comparator on every {a,b} list up to length 3")
{
  std::vector<std::vector<std::string>> lists;
  std::vector<std::vector<std::string>> frontier{{}};
  for (int len = 1; len <= 3; ++len) {
    std::vector<std::vector<std::string>> next;
    for (const auto& l : frontier)
      for (const char* s : {"a", "b"}) {
        auto e = l;
        e.push_back(s);
        next.push_back(e);
        lists.push_back(e);
      }
    frontier = next;
  }
  REQUIRE(lists.size() == 14);
  int mismatches = 0;
  for (const auto& realm_p : {"r", "s"})
    for (const auto& p : lists)
      for (const auto& n : lists) {
        bool expected = std::string(realm_p) == "r" && leading_sublist(p, n);
        mismatches += is_prefix_of(Name(realm_p, p), Name("r", n)) != expected;
      }
  CHECK(mismatches == 0);
}

TEST_CASE("prefix is a partial order and never crosses realms")
{
  Rng rng(12);
  auto gen = [&] { return Name(coin(rng) ? "r" : "s", small_segments(rng, 1, 4)); };
  for (int i = 0; i < 3000; ++i) {
    auto a = gen(), b = gen(), c = gen();
    REQUIRE(is_prefix_of(a, a));
    if (is_prefix_of(a, b) && is_prefix_of(b, c))
      REQUIRE(is_prefix_of(a, c));
    if (is_prefix_of(a, b) && is_prefix_of(b, a))
      REQUIRE(a == b);
    if (a.realm() != b.realm())
      REQUIRE_FALSE(is_prefix_of(a, b));
  }
}

TEST_CASE("namespace realms")
{
  Namespace ns;
  ns.add_realm({"nriA", NamingScheme::hierarchical, "people"});
  ns.add_realm({"epc", NamingScheme::flat, "tags"});
  CHECK_THROWS_AS(ns.add_realm({"nriA", NamingScheme::flat, ""}), Error);
  try {
    ns.add_realm({"nriA", NamingScheme::flat, ""});
  }
  catch (const Error& e) {
    CHECK(e.code() == Errc::DuplicateRealm);
  }
  CHECK_NOTHROW(ns.validate(parse_name("n2n://nriA:Alice.com/cell")));
  CHECK_NOTHROW(ns.validate(parse_name("n2n://epc:urn.epc.1234")));
  try {
    ns.validate(parse_name("n2n://epc:a/b"));
    FAIL("flat realm took two segments");
  }
  catch (const Error& e) {
    CHECK(e.code() == Errc::MalformedUri);
  }
  try {
    ns.validate(parse_name("n2n://nowhere:a"));
    FAIL("unknown realm accepted");
  }
  catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownRealm);
  }
}

TEST_CASE("entity payload follows kind")
{
  NamedEntity e{parse_name("n2n://r:a"), EntityKind::content, "", {}};
  CHECK_THROWS_AS(e.validate(), Error);
  e.payload = "x";
  CHECK_NOTHROW(e.validate());
  e.kind = EntityKind::service_access_point;
  CHECK_THROWS_AS(e.validate(), Error);
  e.payload.clear();
  CHECK_NOTHROW(e.validate());
  CHECK(parse_entity_kind("sap") == EntityKind::service_access_point);
  CHECK(parse_entity_kind(to_string(EntityKind::content)) == EntityKind::content);
}

TEST_CASE("keywords are lowercased, trimmed and non-empty")
{
  NamedEntity e{parse_name("n2n://r:a"), EntityKind::content, "x", {{"keywords", " Article, ,PDF ,pdf"}}};
  CHECK(e.keywords() == std::vector<std::string>{"article", "pdf", "pdf"});
}

}
