#include "fixtures.hpp"

#include <sstream>

#include "revelio/net_parse.hpp"

namespace fixtures {

using revelio::OccurrenceNet;
using revelio::PetriNet;

OccurrenceNet sample_occ() {
  OccurrenceNet o;
  for (int i = 1; i <= 12; ++i) o.place_names.push_back(std::to_string(i));
  for (const char* n : {"a", "b", "c", "d", "e", "f", "g", "h", "k"})
    o.transition_names.push_back(n);

  auto c1 = o.add_condition(0);   // place 1
  auto c2 = o.add_condition(1);   // place 2
  auto a = o.add_event(0, {c1});
  auto c3 = o.add_condition(2, a);
  auto b = o.add_event(1, {c1, c2});
  auto c4 = o.add_condition(3, b);
  auto c5 = o.add_condition(4, b);
  auto c = o.add_event(2, {c2});
  auto c6 = o.add_condition(5, c);
  auto d = o.add_event(3, {c3});
  o.add_condition(6, d);          // place 7
  auto e = o.add_event(4, {c4});
  auto c8 = o.add_condition(7, e);
  auto f = o.add_event(5, {c5});
  o.add_condition(8, f);          // place 9
  auto g = o.add_event(6, {c6});
  o.add_condition(9, g);          // place 10
  auto h = o.add_event(7, {c8});
  o.add_condition(10, h);         // place 11
  auto k = o.add_event(8, {c8});
  o.add_condition(11, k);         // place 12
  return o;
}

std::uint32_t ev(const OccurrenceNet& o, const std::string& name) {
  for (std::uint32_t e = 0; e < o.events.size(); ++e)
    if (o.event_name(e) == name) return e;
  throw revelio::NetError("no event named " + name);
}

std::string sample_cyclic_text() {
  std::ostringstream out;
  out << "net cyclic\n";
  for (int i = 1; i <= 12; ++i)
    out << "place " << i << (i <= 2 ? " *" : "") << "\n";
  struct Arc {
    const char* t;
    std::vector<int> pre, post;
  };
  const Arc arcs[] = {
      {"a", {1}, {3}},       {"b", {1, 2}, {4, 5}}, {"c", {2}, {6}},
      {"d", {3}, {7}},       {"e", {4}, {8}},       {"f", {5}, {9}},
      {"g", {6}, {10}},      {"h", {8}, {11}},      {"k", {8}, {12}},
      {"r", {7, 10}, {1, 2}}, {"t", {9, 11}, {1, 2}}, {"u", {9, 12}, {1, 2}},
  };
  for (const auto& a : arcs) out << "trans " << a.t << "\n";
  for (const auto& a : arcs) {
    for (int p : a.pre) out << "arc " << p << " -> " << a.t << "\n";
    for (int p : a.post) out << "arc " << a.t << " -> " << p << "\n";
  }
  return out.str();
}

PetriNet sample_cyclic_net() {
  return revelio::parse_canonical(sample_cyclic_text());
}

PetriNet self_loop_net() {
  PetriNet net;
  net.name = "self_loop";
  auto p = net.add_place("p");
  auto t = net.add_transition("t");
  net.transitions[t].pre.push_back(p);
  net.transitions[t].post.push_back(p);
  net.initial_marking.add(p);
  return net;
}

PetriNet two_branch_chain(std::uint32_t len) {
  PetriNet net;
  net.name = "two_branch_chain";
  auto p0 = net.add_place("s");
  net.initial_marking.add(p0);
  for (int side = 0; side < 2; ++side) {
    std::string tag = side ? "b" : "a";
    std::uint32_t prev = p0;
    for (std::uint32_t i = 0; i <= len; ++i) {
      auto next = net.add_place(tag + std::to_string(i));
      auto t = net.add_transition(tag + "_t" + std::to_string(i));
      net.transitions[t].pre.push_back(prev);
      net.transitions[t].post.push_back(next);
      prev = next;
    }
  }
  return net;
}

}  // namespace fixtures
