#include "revelio/facets.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

namespace revelio {

namespace {

// Iterative Tarjan over the digraph e -> e' iff e' in rev(e).
std::vector<std::vector<std::uint32_t>> strongly_connected(
    const std::vector<EventSet>& rev) {
  std::uint32_t n = static_cast<std::uint32_t>(rev.size());
  std::vector<std::vector<std::uint32_t>> adj(n);
  for (std::uint32_t e = 0; e < n; ++e)
    rev[e].for_each([&](std::uint32_t e2) {
      if (e2 != e) adj[e].push_back(e2);
    });

  constexpr std::uint32_t none = UINT32_MAX;
  std::vector<std::uint32_t> index(n, none), low(n, none), next(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<std::uint32_t> stack, call;
  std::vector<std::vector<std::uint32_t>> comps;
  std::uint32_t counter = 0;

  for (std::uint32_t root = 0; root < n; ++root) {
    if (index[root] != none) continue;
    call.push_back(root);
    while (!call.empty()) {
      std::uint32_t v = call.back();
      if (index[v] == none) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (next[v] < adj[v].size()) {
        std::uint32_t w = adj[v][next[v]];
        if (index[w] == none) {
          ++next[v];
          call.push_back(w);
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], index[w]);
        ++next[v];
      }
      if (descended) continue;
      call.pop_back();
      if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
      if (low[v] == index[v]) {
        std::vector<std::uint32_t> comp;
        std::uint32_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp.push_back(w);
        } while (w != v);
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
      }
    }
  }
  return comps;
}

}  // namespace

FacetPartition compute_facets(const RevealsMatrix& m) {
  auto comps = strongly_connected(m.rev);
  std::uint32_t n = static_cast<std::uint32_t>(m.rev.size());

  // Condensation order with revealed classes before their revealers, ties
  // broken by smallest member id (deterministic).
  std::uint32_t k = static_cast<std::uint32_t>(comps.size());
  std::vector<std::uint32_t> comp_of(n, 0);
  for (std::uint32_t i = 0; i < k; ++i)
    for (auto e : comps[i]) comp_of[e] = i;
  std::vector<std::vector<std::uint32_t>> succ(k);
  std::vector<std::uint32_t> indeg(k, 0);
  for (std::uint32_t e = 0; e < n; ++e) {
    m.rev[e].for_each([&](std::uint32_t e2) {
      std::uint32_t a = comp_of[e], b = comp_of[e2];
      if (a == b) return;
      succ[b].push_back(a);  // b is revealed by a: b comes first
    });
  }
  for (auto& s : succ) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (auto t : s) ++indeg[t];
  }
  auto min_id = [&](std::uint32_t c) { return comps[c].front(); };
  auto cmp = [&](std::uint32_t a, std::uint32_t b) { return min_id(a) > min_id(b); };
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, decltype(cmp)>
      ready(cmp);
  for (std::uint32_t c = 0; c < k; ++c)
    if (indeg[c] == 0) ready.push(c);

  FacetPartition out;
  out.class_of.assign(n, 0);
  while (!ready.empty()) {
    std::uint32_t c = ready.top();
    ready.pop();
    auto idx = static_cast<std::uint32_t>(out.classes.size());
    EventSet cls(n);
    for (auto e : comps[c]) {
      cls.set(e);
      out.class_of[e] = idx;
    }
    out.classes.push_back(std::move(cls));
    for (auto t : succ[c])
      if (--indeg[t] == 0) ready.push(t);
  }
  return out;
}

namespace {

// Member labels joined in causal DFS preorder within the facet (roots and
// children visited in ascending id).
std::string facet_name(const OccurrenceNet& o, const EventSet& cls) {
  std::vector<std::uint32_t> members = cls.members();
  std::vector<std::vector<std::uint32_t>> children(members.size());
  std::vector<std::uint8_t> has_pred(members.size(), 0);
  std::vector<std::uint32_t> slot(o.events.size(), UINT32_MAX);
  for (std::uint32_t i = 0; i < members.size(); ++i) slot[members[i]] = i;
  for (std::uint32_t i = 0; i < members.size(); ++i) {
    for (auto c : o.events[members[i]].pre) {
      auto p = o.conditions[c].producer;
      if (p && slot[*p] != UINT32_MAX) {
        children[slot[*p]].push_back(members[i]);
        has_pred[i] = 1;
      }
    }
  }
  for (auto& ch : children) {
    std::sort(ch.begin(), ch.end());
    ch.erase(std::unique(ch.begin(), ch.end()), ch.end());
  }
  std::string name;
  std::vector<std::uint8_t> seen(members.size(), 0);
  std::vector<std::uint32_t> stack;
  for (std::uint32_t i = 0; i < members.size(); ++i) {
    if (has_pred[i]) continue;
    stack.push_back(members[i]);
    while (!stack.empty()) {
      std::uint32_t e = stack.back();
      stack.pop_back();
      if (seen[slot[e]]) continue;
      seen[slot[e]] = 1;
      name += o.event_name(e);
      for (auto it = children[slot[e]].rbegin(); it != children[slot[e]].rend(); ++it)
        stack.push_back(*it);
    }
  }
  return name;
}

}  // namespace

OccurrenceNet quotient(const OccurrenceNet& o, const FacetPartition& p) {
  OccurrenceNet q;
  q.place_names = o.place_names;
  for (const auto& cls : p.classes) {
    q.transition_names.push_back(facet_name(o, cls));
    q.events.push_back({static_cast<std::uint32_t>(q.events.size()), {}, {}});
  }

  std::vector<std::uint32_t> cmap(o.conditions.size(), UINT32_MAX);
  for (std::uint32_t c = 0; c < o.conditions.size(); ++c) {
    const auto& cond = o.conditions[c];
    bool drop = cond.producer && !cond.consumers.empty();
    if (drop) {
      std::uint32_t f = p.class_of[*cond.producer];
      for (auto e : cond.consumers)
        if (p.class_of[e] != f) drop = false;
    }
    if (drop) continue;
    auto id = static_cast<std::uint32_t>(q.conditions.size());
    cmap[c] = id;
    std::optional<std::uint32_t> producer;
    if (cond.producer) {
      producer = p.class_of[*cond.producer];
      q.events[*producer].post.push_back(id);
    }
    q.conditions.push_back({cond.label, producer, {}});
    for (auto e : cond.consumers) {
      std::uint32_t f = p.class_of[e];
      auto& pre = q.events[f].pre;
      if (pre.empty() || pre.back() != id) {
        pre.push_back(id);
        q.conditions[id].consumers.push_back(f);
      }
    }
  }
  for (auto& cond : q.conditions) {
    std::sort(cond.consumers.begin(), cond.consumers.end());
    cond.consumers.erase(
        std::unique(cond.consumers.begin(), cond.consumers.end()),
        cond.consumers.end());
  }
  q.refresh_initial();
  return q;
}

std::string facet_listing(const OccurrenceNet& o, const FacetPartition& p) {
  std::ostringstream out;
  for (std::uint32_t i = 0; i < p.classes.size(); ++i) {
    out << "facet " << i << ": {";
    bool first = true;
    p.classes[i].for_each([&](std::uint32_t e) {
      if (!first) out << ',';
      out << o.event_name(e);
      first = false;
    });
    out << "}\n";
  }
  return out.str();
}

std::string quotient_to_dot(const OccurrenceNet& q) {
  std::ostringstream out;
  out << "digraph quotient {\n  rankdir=TB;\n";
  for (std::uint32_t c = 0; c < q.conditions.size(); ++c)
    out << "  c" << c << " [shape=circle, label=\"c" << c << "_"
        << q.condition_name(c) << "\"];\n";
  for (std::uint32_t e = 0; e < q.events.size(); ++e)
    out << "  e" << e << " [shape=box, width=1.2, label=\"" << q.event_name(e)
        << "\"];\n";
  for (std::uint32_t e = 0; e < q.events.size(); ++e) {
    for (auto c : q.events[e].pre) out << "  c" << c << " -> e" << e << ";\n";
    for (auto c : q.events[e].post) out << "  e" << e << " -> c" << c << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace revelio
