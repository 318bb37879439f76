#include <doctest.h>

#include "fixtures.hpp"
#include "revelio/net_parse.hpp"
#include "revelio/petri_net.hpp"

using namespace revelio;

TEST_CASE("marking is a sorted set") {
  Marking m;
  m.add(3);
  m.add(1);
  m.add(3);
  CHECK(m.places == std::vector<std::uint32_t>{1, 3});
  CHECK(m.contains(3));
  m.remove(3);
  CHECK(!m.contains(3));
  CHECK(Marking({2, 1}) == Marking({1, 2}));
}

TEST_CASE("firing moves tokens; self-loop places keep theirs") {
  auto net = fixtures::self_loop_net();
  Marking m = net.initial_marking;
  CHECK(enabled(net, m, 0));
  auto m2 = fire(net, m, 0);
  CHECK(m2 == m);  // pre and post intersect in p

  auto cyc = fixtures::sample_cyclic_net();
  auto b = *cyc.transition_id("b");
  CHECK(enabled(cyc, cyc.initial_marking, b));
  auto after = fire(cyc, cyc.initial_marking, b);
  CHECK(after == Marking({*cyc.place_id("4"), *cyc.place_id("5")}));
  auto a = *cyc.transition_id("a");
  CHECK(!enabled(cyc, after, a));
  CHECK_THROWS_AS(fire(cyc, after, a), NetError);
}

TEST_CASE("safety check explores the reachability graph") {
  auto cyc = fixtures::sample_cyclic_net();
  auto v = check_safety(cyc, 10'000);
  CHECK(v.kind == SafetyVerdict::Kind::safe);
  CHECK(v.explored > 0);

  // Place q can receive a second token: t2 produces q while q is marked.
  PetriNet bad;
  bad.name = "bad";
  auto p = bad.add_place("p");
  auto q = bad.add_place("q");
  auto t = bad.add_transition("t");
  bad.transitions[t].pre = {p};
  bad.transitions[t].post = {q};
  bad.initial_marking.add(p);
  bad.initial_marking.add(q);
  auto v2 = check_safety(bad, 10'000);
  CHECK(v2.kind == SafetyVerdict::Kind::unsafe);
  REQUIRE(v2.witness.has_value());
  CHECK(v2.witness->transitions == std::vector<std::uint32_t>{t});

  auto v3 = check_safety(cyc, 1);
  CHECK(v3.kind == SafetyVerdict::Kind::inconclusive);
}

TEST_CASE("structural validation") {
  PetriNet net;
  net.name = "n";
  CHECK_THROWS_AS(validate(net), NetError);  // no places
  net.add_place("p");
  CHECK_NOTHROW(validate(net));
  net.initial_marking.add(7);
  CHECK_THROWS_AS(validate(net), NetError);  // marking out of range
}

TEST_CASE("canonical format round-trips") {
  auto net = fixtures::sample_cyclic_net();
  auto text = serialize_canonical(net);
  auto again = parse_canonical(text);
  CHECK(serialize_canonical(again) == text);
  CHECK(again.places.size() == 12);
  CHECK(again.transitions.size() == 12);
  CHECK(again.initial_marking == net.initial_marking);
}

TEST_CASE("canonical parse errors carry line numbers") {
  CHECK_THROWS_WITH_AS(parse_canonical("place p\n"),
                       "line 1: expected 'net <name>' header", ParseError);
  CHECK_THROWS_WITH_AS(parse_canonical("net n\nplace p\nplace p\n"),
                       "line 3: duplicate name: p", ParseError);
  CHECK_THROWS_WITH_AS(parse_canonical("net n\nplace p\ntrans t\narc q -> t\n"),
                       "line 4: arc references undeclared node: q", ParseError);
  CHECK_THROWS_AS(parse_canonical("net n\n"), ParseError);  // no places
}

TEST_CASE("format auto-detection") {
  CHECK(detect_format("net x\n") == InputFormat::canonical);
  CHECK(detect_format("PEP\nPetriBox\nFORMAT_N2\n") == InputFormat::llnet);
  CHECK(detect_format("# prefix x\n") == InputFormat::prefix_dump);
  CHECK_THROWS_AS(detect_format("digraph {}\n"), ParseError);
}

TEST_CASE("ll_net subset parses and rejects non-safe markings") {
  std::string good =
      "PEP\nPetriBox\nFORMAT_N2\nPL\n1\"p1\"M1\n2\"p2\"\nTR\n1\"t1\"\nTP\n"
      "1<2\nPT\n1>1\n";
  auto net = parse_llnet(good);
  CHECK(net.places.size() == 2);
  CHECK(net.transitions.size() == 1);
  CHECK(net.initial_marking == Marking({*net.place_id("p1")}));
  CHECK(net.transitions[0].pre == std::vector<std::uint32_t>{*net.place_id("p1")});
  CHECK(net.transitions[0].post == std::vector<std::uint32_t>{*net.place_id("p2")});

  std::string two_tokens =
      "PEP\nPetriBox\nFORMAT_N2\nPL\n1\"p1\"M2\nTR\n1\"t1\"\nPT\n1>1\n";
  CHECK_THROWS_WITH_AS(parse_llnet(two_tokens),
                       "line 5: marking exceeds 1; only safe nets supported",
                       ParseError);

  std::string coords =
      "PEP\nPetriBox\nFORMAT_N2\nPL\n1\"p1\"9@9M1\nTR\n1\"t1\"\nPT\n1>1\n";
  CHECK_NOTHROW(parse_llnet(coords));
}
