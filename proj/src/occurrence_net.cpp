#include "revelio/occurrence_net.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace revelio {

std::uint32_t OccurrenceNet::add_condition(std::uint32_t label,
                                           std::optional<std::uint32_t> producer) {
  auto id = static_cast<std::uint32_t>(conditions.size());
  conditions.push_back({label, producer, {}});
  if (producer) {
    auto& post = events.at(*producer).post;
    auto it = std::lower_bound(post.begin(), post.end(), id);
    post.insert(it, id);
  } else {
    initial_conditions.push_back(id);
  }
  return id;
}

std::uint32_t OccurrenceNet::add_event(std::uint32_t label,
                                       std::vector<std::uint32_t> pre) {
  auto id = static_cast<std::uint32_t>(events.size());
  std::sort(pre.begin(), pre.end());
  for (auto c : pre) conditions.at(c).consumers.push_back(id);
  events.push_back({label, std::move(pre), {}});
  return id;
}

void OccurrenceNet::refresh_initial() {
  initial_conditions.clear();
  for (std::uint32_t c = 0; c < conditions.size(); ++c)
    if (!conditions[c].producer) initial_conditions.push_back(c);
}

std::vector<std::uint32_t> event_heights(const OccurrenceNet& o) {
  std::vector<std::uint32_t> h(o.events.size(), 0);
  std::vector<std::uint8_t> state(o.events.size(), 0);  // 0 new, 1 open, 2 done
  std::vector<std::uint32_t> stack;
  for (std::uint32_t root = 0; root < o.events.size(); ++root) {
    if (state[root] == 2) continue;
    stack.push_back(root);
    while (!stack.empty()) {
      std::uint32_t e = stack.back();
      if (state[e] == 0) {
        state[e] = 1;
        for (auto c : o.events[e].pre) {
          auto p = o.conditions[c].producer;
          if (!p) continue;
          if (state[*p] == 1) throw NetError("flow relation is cyclic");
          if (state[*p] == 0) stack.push_back(*p);
        }
      } else {
        stack.pop_back();
        if (state[e] == 2) continue;
        state[e] = 2;
        std::uint32_t m = 0;
        for (auto c : o.events[e].pre) {
          auto p = o.conditions[c].producer;
          if (p) m = std::max(m, h[*p]);
        }
        h[e] = m + 1;
      }
    }
  }
  return h;
}

std::uint32_t height(const OccurrenceNet& o, std::uint32_t e) {
  return event_heights(o).at(e);
}

std::uint32_t prefix_height(const OccurrenceNet& o) {
  auto h = event_heights(o);
  return h.empty() ? 0 : *std::max_element(h.begin(), h.end());
}

std::vector<std::uint32_t> topological_order(const OccurrenceNet& o) {
  auto h = event_heights(o);
  std::vector<std::uint32_t> order(o.events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t a, std::uint32_t b) {
                     if (h[a] != h[b]) return h[a] < h[b];
                     return a < b;
                   });
  return order;
}

Configuration cone(const OccurrenceNet& o, std::uint32_t e) {
  Configuration cfg{EventSet(o.events.size())};
  std::vector<std::uint32_t> stack{e};
  while (!stack.empty()) {
    std::uint32_t cur = stack.back();
    stack.pop_back();
    if (cfg.events.test(cur)) continue;
    cfg.events.set(cur);
    for (auto c : o.events[cur].pre) {
      auto p = o.conditions[c].producer;
      if (p && !cfg.events.test(*p)) stack.push_back(*p);
    }
  }
  return cfg;
}

Configuration precone(const OccurrenceNet& o, std::uint32_t e) {
  Configuration cfg = cone(o, e);
  cfg.events.reset(e);
  return cfg;
}

namespace {

// True iff two event sets contain distinct events competing for a condition.
// For sets that are cones of valid occurrence nets this matches the conflict
// definition (clause (i) excludes the shared-event case).
bool sets_conflict(const OccurrenceNet& o, const EventSet& a, const EventSet& b) {
  std::unordered_map<std::uint32_t, std::uint32_t> consumer_in_a;
  bool clash = false;
  a.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre) consumer_in_a.emplace(c, e);
  });
  b.for_each([&](std::uint32_t e) {
    if (clash) return;
    for (auto c : o.events[e].pre) {
      auto it = consumer_in_a.find(c);
      if (it != consumer_in_a.end() && it->second != e) {
        clash = true;
        return;
      }
    }
  });
  return clash;
}

EventSet condition_past_events(const OccurrenceNet& o, std::uint32_t c) {
  auto p = o.conditions[c].producer;
  if (!p) return EventSet(o.events.size());
  return cone(o, *p).events;
}

bool condition_below(const OccurrenceNet& o, std::uint32_t c, std::uint32_t c2) {
  // c < c2: c lies strictly in the causal past of c2.
  auto p = o.conditions[c2].producer;
  if (!p) return false;
  EventSet past = cone(o, *p).events;
  bool found = false;
  past.for_each([&](std::uint32_t e) {
    for (auto d : o.events[e].pre)
      if (d == c) found = true;
  });
  return found;
}

}  // namespace

NodeRelation relation_of(const OccurrenceNet& o, std::uint32_t c, std::uint32_t c2) {
  if (c == c2) return NodeRelation::equal;
  if (condition_below(o, c, c2) || condition_below(o, c2, c))
    return NodeRelation::causal;
  EventSet a = condition_past_events(o, c);
  EventSet b = condition_past_events(o, c2);
  if (sets_conflict(o, a, b)) return NodeRelation::conflict;
  return NodeRelation::concurrent;
}

bool is_configuration(const OccurrenceNet& o, const EventSet& events) {
  bool ok = true;
  events.for_each([&](std::uint32_t e) {
    if (!ok) return;
    for (auto c : o.events[e].pre) {
      auto p = o.conditions[c].producer;
      if (p && !events.test(*p)) ok = false;  // not downward-closed
    }
  });
  if (!ok) return false;
  // Conflict-free: no condition consumed by two distinct members.
  std::unordered_map<std::uint32_t, std::uint32_t> consumer;
  events.for_each([&](std::uint32_t e) {
    if (!ok) return;
    for (auto c : o.events[e].pre)
      if (!consumer.emplace(c, e).second) ok = false;
  });
  return ok;
}

std::pair<std::vector<std::uint32_t>, Marking> cut_and_mark(const OccurrenceNet& o,
                                                            const Configuration& cfg) {
  if (!is_configuration(o, cfg.events))
    throw NetError("event set is not a configuration");
  EventSet consumed(o.conditions.size());
  EventSet present(o.conditions.size());
  for (auto c : o.initial_conditions) present.set(c);
  cfg.events.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre) consumed.set(c);
    for (auto c : o.events[e].post) present.set(c);
  });
  present.subtract(consumed);
  std::vector<std::uint32_t> cut = present.members();
  Marking mark;
  for (auto c : cut) mark.add(o.conditions[c].label);
  return {cut, mark};
}

OccurrenceNet postfix(const OccurrenceNet& o, const Configuration& cfg) {
  auto [cut, mark] = cut_and_mark(o, cfg);  // validates cfg
  (void)cut;
  (void)mark;
  // Keep events compatible with C (their cone extends C to a configuration),
  // and conditions that are not consumed by C and whose producer is kept.
  EventSet consumed(o.conditions.size());
  cfg.events.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre) consumed.set(c);
  });
  OccurrenceNet out;
  out.place_names = o.place_names;
  out.transition_names = o.transition_names;
  std::vector<std::uint32_t> cmap(o.conditions.size(), UINT32_MAX);
  std::vector<std::uint32_t> emap(o.events.size(), UINT32_MAX);
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    if (cfg.events.test(e)) continue;
    EventSet joint = cone(o, e).events;
    joint |= cfg.events;
    if (!is_configuration(o, joint)) continue;  // in conflict with C
    emap[e] = static_cast<std::uint32_t>(out.events.size());
    out.events.push_back({o.events[e].label, {}, {}});
  }
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c) {
    if (consumed.test(c)) continue;
    auto p = o.conditions[c].producer;
    if (p && !cfg.events.test(*p) && emap[*p] == UINT32_MAX) continue;
    cmap[c] = static_cast<std::uint32_t>(out.conditions.size());
    out.conditions.push_back({o.conditions[c].label, std::nullopt, {}});
  }
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c) {
    if (cmap[c] == UINT32_MAX) continue;
    auto p = o.conditions[c].producer;
    if (p && emap[*p] != UINT32_MAX) {
      out.conditions[cmap[c]].producer = emap[*p];
      out.events[emap[*p]].post.push_back(cmap[c]);
    }
    for (auto e : o.conditions[c].consumers) {
      if (emap[e] == UINT32_MAX) continue;
      out.conditions[cmap[c]].consumers.push_back(emap[e]);
      out.events[emap[e]].pre.push_back(cmap[c]);
    }
  }
  out.refresh_initial();
  return out;
}

void validate(const OccurrenceNet& o) {
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c) {
    const auto& cond = o.conditions[c];
    if (cond.label >= o.place_names.size())
      throw NetError("condition label out of range");
    if (cond.producer && *cond.producer >= o.events.size())
      throw NetError("condition producer out of range");
  }
  for (const auto& e : o.events)
    if (e.label >= o.transition_names.size())
      throw NetError("event label out of range");

  event_heights(o);  // throws on cycle

  // Initial conditions are exactly the producer-free ones.
  std::vector<std::uint32_t> minimal;
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c)
    if (!o.conditions[c].producer) minimal.push_back(c);
  auto init = o.initial_conditions;
  std::sort(init.begin(), init.end());
  if (init != minimal)
    throw NetError("initial conditions differ from the producer-free conditions");

  // No self-conflict: every cone is conflict-free.
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    auto cfg = cone(o, e);
    std::unordered_map<std::uint32_t, std::uint32_t> consumer;
    bool ok = true;
    cfg.events.for_each([&](std::uint32_t ev) {
      for (auto c : o.events[ev].pre)
        if (!consumer.emplace(c, ev).second) ok = false;
    });
    if (!ok) throw NetError("event in self-conflict: " + o.event_name(e));
  }
}

PetriNet as_petri_net(const OccurrenceNet& o) {
  PetriNet net;
  net.name = "occ";
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c)
    net.add_place("c" + std::to_string(c));
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    auto t = net.add_transition("e" + std::to_string(e));
    net.transitions[t].pre = o.events[e].pre;
    net.transitions[t].post = o.events[e].post;
  }
  for (auto c : o.initial_conditions) net.initial_marking.add(c);
  return net;
}

std::string to_dot(const OccurrenceNet& o, const EventSet* cutoffs) {
  std::ostringstream out;
  out << "digraph occurrence_net {\n  rankdir=TB;\n";
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c)
    out << "  c" << c << " [shape=circle, label=\"c" << c << "_"
        << o.condition_name(c) << "\"];\n";
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    out << "  e" << e << " [shape=box, label=\"e" << e << "_" << o.event_name(e)
        << "\"";
    if (cutoffs && cutoffs->test(e)) out << ", peripheries=2";
    out << "];\n";
  }
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    for (auto c : o.events[e].pre) out << "  c" << c << " -> e" << e << ";\n";
    for (auto c : o.events[e].post) out << "  e" << e << " -> c" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace revelio
