#include "revelio/oracle.hpp"

#include <algorithm>
#include <random>

namespace revelio {

namespace {

struct Enumerator {
  const OccurrenceNet& o;
  std::size_t limit;
  std::vector<std::uint32_t> rank;       // topo rank per event
  std::vector<std::uint32_t> by_rank;    // event ids in topo order
  MaximalConfigSet out;

  explicit Enumerator(const OccurrenceNet& net, std::size_t lim)
      : o(net), limit(lim), rank(net.events.size()) {
    by_rank = topological_order(net);
    for (std::uint32_t r = 0; r < by_rank.size(); ++r) rank[by_rank[r]] = r;
  }

  bool addable(const EventSet& avail, std::uint32_t e) const {
    for (auto c : o.events[e].pre)
      if (!avail.test(c)) return false;
    return true;
  }

  // Configurations are grown in ascending topo rank; since every prefix of a
  // rank-sorted configuration is itself a configuration, each one is reached
  // exactly once.
  void dfs(EventSet& cfg, EventSet& avail, std::uint32_t min_rank) {
    bool extended = false, maximal = true;
    for (std::uint32_t r = 0; r < by_rank.size(); ++r) {
      std::uint32_t e = by_rank[r];
      if (cfg.test(e) || !addable(avail, e)) continue;
      maximal = false;
      if (r < min_rank) continue;
      extended = true;
      cfg.set(e);
      for (auto c : o.events[e].pre) avail.reset(c);
      for (auto c : o.events[e].post) avail.set(c);
      dfs(cfg, avail, r + 1);
      for (auto c : o.events[e].post) avail.reset(c);
      for (auto c : o.events[e].pre) avail.set(c);
      cfg.reset(e);
    }
    (void)extended;
    if (maximal) {
      if (out.configs.size() >= limit)
        throw NetError("maximal configuration limit exceeded");
      out.configs.push_back(cfg);
    }
  }
};

}  // namespace

MaximalConfigSet enumerate_maximal(const OccurrenceNet& o, std::size_t limit) {
  Enumerator en(o, limit);
  EventSet cfg(o.events.size());
  EventSet avail(o.conditions.size());
  for (auto c : o.initial_conditions) avail.set(c);
  en.dfs(cfg, avail, 0);
  return std::move(en.out);
}

bool oracle_reveals(const MaximalConfigSet& mc, std::uint32_t x, std::uint32_t y) {
  for (const auto& cfg : mc.configs)
    if (cfg.test(x) && !cfg.test(y)) return false;
  return true;
}

EventSet conflict_row_naive(const OccurrenceNet& o, std::uint32_t e) {
  EventSet row(o.events.size());
  EventSet mine = cone(o, e).events;
  for (std::uint32_t e2 = 0; e2 < o.events.size(); ++e2) {
    if (e2 == e) continue;
    EventSet other = cone(o, e2).events;
    bool clash = false;
    mine.for_each([&](std::uint32_t f) {
      if (clash) return;
      other.for_each([&](std::uint32_t g) {
        if (clash || f == g) return;
        const auto& a = o.events[f].pre;
        const auto& b = o.events[g].pre;
        for (auto c : a)
          if (std::binary_search(b.begin(), b.end(), c)) {
            clash = true;
            return;
          }
      });
    });
    if (clash) row.set(e2);
  }
  return row;
}

namespace {

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t bound) {
  return bound ? rng() % bound : 0;
}

}  // namespace

OccurrenceNet random_occurrence_net(std::uint64_t seed, const RandomNetParams& p) {
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + 1);
  OccurrenceNet o;
  for (std::uint32_t i = 0; i < p.place_kinds; ++i)
    o.place_names.push_back("p" + std::to_string(i));
  for (std::uint32_t i = 0; i < p.transition_kinds; ++i)
    o.transition_names.push_back("t" + std::to_string(i));

  std::uint32_t init = std::max<std::uint32_t>(1, p.initial_conditions);
  for (std::uint32_t i = 0; i < init; ++i)
    o.add_condition(static_cast<std::uint32_t>(draw(rng, p.place_kinds)));

  for (std::uint32_t i = 0; i < p.events; ++i) {
    std::uint32_t n = static_cast<std::uint32_t>(o.conditions.size());
    std::vector<std::uint32_t> pre;
    pre.push_back(static_cast<std::uint32_t>(draw(rng, n)));
    // Try to join a concurrent second condition half the time.
    if (draw(rng, 2)) {
      for (int attempt = 0; attempt < 4; ++attempt) {
        auto c2 = static_cast<std::uint32_t>(draw(rng, n));
        if (relation_of(o, pre[0], c2) == NodeRelation::concurrent) {
          pre.push_back(c2);
          break;
        }
      }
    }
    auto e = o.add_event(static_cast<std::uint32_t>(draw(rng, p.transition_kinds)),
                         std::move(pre));
    std::uint32_t posts = 1 + static_cast<std::uint32_t>(draw(rng, 2));
    for (std::uint32_t j = 0; j < posts; ++j)
      o.add_condition(static_cast<std::uint32_t>(draw(rng, p.place_kinds)), e);
  }
  return o;
}

PetriNet random_safe_net(std::uint64_t seed, std::uint32_t max_places) {
  std::mt19937_64 rng(seed * 0xbf58476d1ce4e5b9ull + 7);
  PetriNet net;
  net.name = "rand" + std::to_string(seed);

  std::uint32_t rings = max_places >= 4 && draw(rng, 2) ? 2 : 1;
  std::vector<std::vector<std::uint32_t>> ring(rings);
  std::uint32_t budget = std::max<std::uint32_t>(2, max_places);
  for (std::uint32_t r = 0; r < rings; ++r) {
    std::uint32_t size =
        2 + static_cast<std::uint32_t>(draw(rng, budget / rings - 1));
    for (std::uint32_t i = 0; i < size; ++i)
      ring[r].push_back(
          net.add_place("r" + std::to_string(r) + "p" + std::to_string(i)));
    net.initial_marking.add(ring[r][0]);
  }

  std::uint32_t t = 0;
  auto advance = [&](std::uint32_t r, std::uint32_t from, std::uint32_t to) {
    auto id = net.add_transition("t" + std::to_string(t++));
    net.transitions[id].pre.push_back(ring[r][from]);
    net.transitions[id].post.push_back(ring[r][to]);
  };
  for (std::uint32_t r = 0; r < rings; ++r) {
    auto size = static_cast<std::uint32_t>(ring[r].size());
    for (std::uint32_t i = 0; i < size; ++i) advance(r, i, (i + 1) % size);
    // A couple of extra choice transitions (skips) keep the ring safe: still
    // one token consumed and one produced within the ring.
    std::uint32_t extras = static_cast<std::uint32_t>(draw(rng, 3));
    for (std::uint32_t x = 0; x < extras; ++x) {
      auto from = static_cast<std::uint32_t>(draw(rng, size));
      auto to = static_cast<std::uint32_t>(draw(rng, size));
      advance(r, from, to);
    }
  }
  if (rings == 2 && draw(rng, 2)) {
    // Synchronizing transition stepping both rings at once.
    auto id = net.add_transition("t" + std::to_string(t++));
    for (std::uint32_t r = 0; r < 2; ++r) {
      auto size = static_cast<std::uint32_t>(ring[r].size());
      auto from = static_cast<std::uint32_t>(draw(rng, size));
      net.transitions[id].pre.push_back(ring[r][from]);
      net.transitions[id].post.push_back(ring[r][(from + 1) % size]);
    }
    std::sort(net.transitions[id].pre.begin(), net.transitions[id].pre.end());
    std::sort(net.transitions[id].post.begin(), net.transitions[id].post.end());
  }
  return net;
}

std::uint64_t structural_digest(const OccurrenceNet& o) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(o.conditions.size());
  mix(o.events.size());
  for (const auto& c : o.conditions) {
    mix(c.label);
    mix(c.producer ? *c.producer + 1 : 0);
  }
  for (const auto& e : o.events) {
    mix(e.label);
    for (auto c : e.pre) mix(c + 1);
    mix(UINT64_MAX);
    for (auto c : e.post) mix(c + 1);
    mix(UINT64_MAX - 1);
  }
  return h;
}

}  // namespace revelio
