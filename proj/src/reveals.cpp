#include "revelio/reveals.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>

namespace revelio {

namespace {

// Direct causal predecessors: producers of e's preset conditions.
template <class F>
void for_direct_preds(const OccurrenceNet& o, std::uint32_t e, F f) {
  for (auto c : o.events[e].pre) {
    auto p = o.conditions[c].producer;
    if (p) f(*p);
  }
}

}  // namespace

std::vector<EventSet> pass1_post(const OccurrenceNet& o,
                                 const std::vector<std::uint32_t>& topo) {
  std::size_t n = o.events.size();
  std::vector<EventSet> post(n, EventSet(n));
  for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
    std::uint32_t e = *it;
    post[e].set(e);
    for (auto c : o.events[e].post)
      for (auto e2 : o.conditions[c].consumers) post[e] |= post[e2];
  }
  return post;
}

std::vector<EventSet> pass2_conf(const OccurrenceNet& o,
                                 const std::vector<std::uint32_t>& topo,
                                 const std::vector<EventSet>& post) {
  std::size_t n = o.events.size();
  std::vector<EventSet> conf(n, EventSet(n));
  for (auto e : topo) {
    for_direct_preds(o, e, [&](std::uint32_t p) { conf[e] |= conf[p]; });
    for (auto c : o.events[e].pre)
      for (auto e2 : o.conditions[c].consumers)
        if (e2 != e) conf[e] |= post[e2];
  }
  return conf;
}

std::vector<EventSet> pass3_rev(const OccurrenceNet& o,
                                const std::vector<std::uint32_t>& topo,
                                const std::vector<EventSet>& conf,
                                const RevealsOptions& opts) {
  std::size_t n = o.events.size();
  std::vector<EventSet> rev(n, EventSet(n));
  if (opts.rev_superset_variant) {
    // Seed reflexivity so the rev-superset test reads {e2} for events not yet
    // swept instead of the empty set; keeps the variant deterministic.
    for (std::uint32_t e = 0; e < n; ++e) rev[e].set(e);
  }

  auto process = [&](std::uint32_t e) {
    rev[e].set(e);
    for_direct_preds(o, e, [&](std::uint32_t p) { rev[e] |= rev[p]; });
    for (std::uint32_t e2 = 0; e2 < n; ++e2) {
      if (rev[e].test(e2) || conf[e].test(e2)) continue;
      bool revealed = opts.rev_superset_variant ? rev[e].contains_all(rev[e2])
                                                : conf[e].contains_all(conf[e2]);
      if (revealed) rev[e].set(e2);
    }
  };

  if (opts.threads <= 1) {
    for (auto e : topo) process(e);
    return rev;
  }

  // Events of equal height have finalized predecessor rows; process each
  // height layer in parallel. Results are bit-identical to the sweep.
  auto h = event_heights(o);
  std::size_t i = 0;
  while (i < topo.size()) {
    std::size_t j = i;
    while (j < topo.size() && h[topo[j]] == h[topo[i]]) ++j;
    std::size_t count = j - i;
    unsigned workers = std::min<std::size_t>(opts.threads, count);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = i + w; k < j; k += workers) process(topo[k]);
      });
    }
    for (auto& t : pool) t.join();
    i = j;
  }
  return rev;
}

RevealsMatrix reveals_all(const OccurrenceNet& o, std::optional<std::uint32_t> k,
                          const RevealsOptions& opts, PassTimings* timings) {
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };

  RevealsMatrix m;
  m.heights = event_heights(o);
  auto topo = topological_order(o);

  auto t0 = clock::now();
  m.post = pass1_post(o, topo);
  auto t1 = clock::now();
  m.conf = pass2_conf(o, topo, m.post);
  auto t2 = clock::now();
  m.rev = pass3_rev(o, topo, m.conf, opts);
  auto t3 = clock::now();
  if (timings) {
    timings->post_s = seconds(t0, t1);
    timings->conf_s = seconds(t1, t2);
    timings->rev_s = seconds(t2, t3);
  }

  std::uint32_t ph =
      m.heights.empty() ? 0 : *std::max_element(m.heights.begin(), m.heights.end());
  m.trusted_height = k ? (ph > *k ? ph - *k : 0) : ph;
  return m;
}

bool witness_predicate(const RevealsMatrix& m, std::uint32_t x, std::uint32_t y,
                       std::uint32_t z) {
  return m.conf[z].test(y) && !m.conf[z].test(x);
}

EventSet root_conflicts(const OccurrenceNet& o, std::uint32_t y) {
  auto topo = topological_order(o);
  auto post = pass1_post(o, topo);
  EventSet coneY = cone(o, y).events;

  // #[y] = union of post{e2} over events e2 competing for a condition with a
  // member of the cone of y.
  EventSet confY(o.events.size());
  coneY.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre)
      for (auto e2 : o.conditions[c].consumers)
        if (e2 != e) confY |= post[e2];
  });

  // Conflict is inherited along <, so minimality can be checked on direct
  // causal predecessors.
  EventSet roots(o.events.size());
  confY.for_each([&](std::uint32_t z) {
    bool minimal = true;
    for_direct_preds(o, z, [&](std::uint32_t p) {
      if (confY.test(p)) minimal = false;
    });
    if (minimal) roots.set(z);
  });
  return roots;
}

namespace {

struct ResolvedPair {
  UnfoldingPrefix prefix;
  std::uint32_t x, y;
};

std::optional<std::uint32_t> try_resolve(const UnfoldingPrefix& p,
                                         const EventSelector& sel) {
  if (sel.id) return *sel.id < p.occ.events.size() ? sel.id : std::nullopt;
  if (sel.name) {
    auto label = p.net->transition_id(*sel.name);
    if (!label) throw NetError("unknown transition: " + *sel.name);
    for (std::uint32_t e = 0; e < p.occ.events.size(); ++e)
      if (p.occ.events[e].label == *label) return e;
    return std::nullopt;
  }
  // Firing sequence: replay on the prefix; each step is the unique event with
  // the right label whose preset lies in the current cut.
  EventSet cut(p.occ.conditions.size());
  for (auto c : p.occ.initial_conditions) cut.set(c);
  std::optional<std::uint32_t> last;
  for (const auto& name : *sel.firing) {
    auto label = p.net->transition_id(name);
    if (!label) throw NetError("unknown transition: " + name);
    std::optional<std::uint32_t> hit;
    for (std::uint32_t e = 0; e < p.occ.events.size(); ++e) {
      if (p.occ.events[e].label != *label) continue;
      bool ok = true;
      for (auto c : p.occ.events[e].pre)
        if (!cut.test(c)) ok = false;
      if (ok) {
        hit = e;
        break;
      }
    }
    if (!hit) return std::nullopt;
    for (auto c : p.occ.events[*hit].pre) cut.reset(c);
    for (auto c : p.occ.events[*hit].post) cut.set(c);
    last = hit;
  }
  return last;
}

ResolvedPair resolve_pair(const PetriNet& net, const EventSelector& xs,
                          const EventSelector& ys, const ResourceLimits& limits) {
  std::uint32_t h = 2;
  for (const auto& sel : {xs, ys})
    if (sel.firing)
      h = std::max<std::uint32_t>(h, static_cast<std::uint32_t>(sel.firing->size()) + 1);
  std::size_t prev_events = SIZE_MAX;
  while (true) {
    auto p = unfold(net, CutoffPolicy::height_bound(h), limits);
    auto x = try_resolve(p, xs);
    auto y = try_resolve(p, ys);
    if (x && y) return {std::move(p), *x, *y};
    if (p.occ.events.size() == prev_events)
      throw NetError("event selector resolves to no event of the unfolding");
    prev_events = p.occ.events.size();
    h *= 2;
  }
}

}  // namespace

PairVerdict check_pair(const PetriNet& net, const EventSelector& xs,
                       const EventSelector& ys, const ResourceLimits& limits) {
  validate(net);
  auto resolved = resolve_pair(net, xs, ys, limits);
  std::uint32_t x = resolved.x, y = resolved.y;

  PairVerdict out;
  if (x == y) {
    out.reveals = true;
    return out;
  }
  std::uint32_t n =
      std::max(resolved.prefix.event_height[x], resolved.prefix.event_height[y]);
  std::uint32_t k = bound_k(net, limits);
  std::uint32_t bound = n + k;
  out.report.height_bound_used = bound;

  auto p = unfold(net, CutoffPolicy::height_bound(bound), limits);
  const auto& o = p.occ;
  EventSet coneX = cone(o, x).events;
  EventSet coneY = cone(o, y).events;

  if (coneX.test(y)) {  // y <= x: reveals along causality
    out.reveals = true;
    return out;
  }

  // x # y: x itself is a witness.
  {
    std::unordered_map<std::uint32_t, std::uint32_t> consumer;
    bool clash = false;
    coneX.for_each([&](std::uint32_t e) {
      for (auto c : o.events[e].pre) consumer.emplace(c, e);
    });
    coneY.for_each([&](std::uint32_t e) {
      for (auto c : o.events[e].pre) {
        auto it = consumer.find(c);
        if (it != consumer.end() && it->second != e) clash = true;
      }
    });
    if (clash) {
      out.reveals = false;
      out.report.found = true;
      out.report.witness = x;
      return out;
    }
  }

  auto topo = topological_order(o);
  auto post = pass1_post(o, topo);

  // Events in conflict with x ("useless": they cannot be witnesses).
  EventSet confX(o.events.size());
  coneX.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre)
      for (auto e2 : o.conditions[c].consumers)
        if (e2 != e) confX |= post[e2];
  });

  // Goal conditions: consumed by the cone of y. Any non-useless event outside
  // cone(y) consuming one is a witness (it conflicts with y).
  EventSet goals(o.conditions.size());
  coneY.for_each([&](std::uint32_t e) {
    for (auto c : o.events[e].pre) goals.set(c);
  });

  bool found = false;
  std::uint32_t witness = 0;
  std::size_t explored = 0;
  goals.for_each([&](std::uint32_t c) {
    if (found) return;
    for (auto z : o.conditions[c].consumers) {
      if (found) break;
      ++explored;
      if (coneY.test(z)) continue;
      if (coneX.test(z) || confX.test(z)) continue;
      found = true;
      witness = z;
    }
  });

  out.report.explored = explored;
  if (found) {
    out.reveals = false;
    out.report.found = true;
    out.report.witness = witness;
  } else {
    out.reveals = true;  // exact: no witness exists below the height bound
  }
  return out;
}

std::string matrix_to_csv(const RevealsMatrix& m) {
  std::ostringstream out;
  out << "event,reveals,conflicts,successors\n";
  auto emit = [&](const EventSet& s) {
    bool first = true;
    s.for_each([&](std::uint32_t i) {
      if (!first) out << ' ';
      out << i;
      first = false;
    });
  };
  for (std::uint32_t e = 0; e < m.rev.size(); ++e) {
    out << e << ',';
    emit(m.rev[e]);
    out << ',';
    emit(m.conf[e]);
    out << ',';
    emit(m.post[e]);
    out << '\n';
  }
  return out.str();
}

namespace {

void append_rows(std::vector<std::uint8_t>& out, const std::vector<EventSet>& rows,
                 std::size_t n) {
  std::size_t row_bytes = (n + 7) / 8;
  for (const auto& row : rows) {
    std::size_t base = out.size();
    out.resize(base + row_bytes, 0);
    row.for_each([&](std::uint32_t i) {
      out[base + i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    });
  }
}

}  // namespace

std::vector<std::uint8_t> matrix_to_binary(const RevealsMatrix& m) {
  std::vector<std::uint8_t> out{'R', 'V', 'L', '1'};
  auto n = static_cast<std::uint32_t>(m.rev.size());
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<std::uint8_t>((n >> (8 * i)) & 0xff));
  append_rows(out, m.post, n);
  append_rows(out, m.conf, n);
  append_rows(out, m.rev, n);
  return out;
}

RevealsMatrix matrix_from_binary(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), "RVL1", 4) != 0)
    throw NetError("bad matrix dump: missing RVL1 magic");
  std::uint32_t n = 0;
  for (int i = 0; i < 4; ++i) n |= std::uint32_t{bytes[4 + i]} << (8 * i);
  std::size_t row_bytes = (n + 7) / 8;
  if (bytes.size() != 8 + 3ull * n * row_bytes)
    throw NetError("bad matrix dump: truncated");
  RevealsMatrix m;
  std::size_t off = 8;
  auto read_rows = [&](std::vector<EventSet>& rows) {
    rows.assign(n, EventSet(n));
    for (std::uint32_t e = 0; e < n; ++e) {
      for (std::uint32_t i = 0; i < n; ++i)
        if (bytes[off + i / 8] & (1u << (i % 8))) rows[e].set(i);
      off += row_bytes;
    }
  };
  read_rows(m.post);
  read_rows(m.conf);
  read_rows(m.rev);
  return m;
}

}  // namespace revelio
