#include "revelio/petri_net.hpp"

#include <algorithm>
#include <map>
#include <queue>

namespace revelio {

Marking::Marking(std::vector<std::uint32_t> p) : places(std::move(p)) {
  std::sort(places.begin(), places.end());
  places.erase(std::unique(places.begin(), places.end()), places.end());
}

bool Marking::contains(std::uint32_t p) const {
  return std::binary_search(places.begin(), places.end(), p);
}

void Marking::add(std::uint32_t p) {
  auto it = std::lower_bound(places.begin(), places.end(), p);
  if (it == places.end() || *it != p) places.insert(it, p);
}

void Marking::remove(std::uint32_t p) {
  auto it = std::lower_bound(places.begin(), places.end(), p);
  if (it != places.end() && *it == p) places.erase(it);
}

std::optional<std::uint32_t> PetriNet::place_id(std::string_view name) const {
  auto it = place_index_.find(std::string(name));
  if (it == place_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> PetriNet::transition_id(std::string_view name) const {
  auto it = transition_index_.find(std::string(name));
  if (it == transition_index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t PetriNet::add_place(const std::string& name) {
  auto id = static_cast<std::uint32_t>(places.size());
  places.push_back({name});
  place_index_.emplace(name, id);
  return id;
}

std::uint32_t PetriNet::add_transition(const std::string& name) {
  auto id = static_cast<std::uint32_t>(transitions.size());
  transitions.push_back({name, {}, {}});
  transition_index_.emplace(name, id);
  return id;
}

void validate(const PetriNet& net) {
  if (net.places.empty()) throw NetError("net must contain at least one place");
  std::map<std::string, int> names;
  for (const auto& p : net.places) {
    if (p.name.empty()) throw NetError("empty place name");
    if (++names[p.name] > 1) throw NetError("duplicate name: " + p.name);
  }
  for (const auto& t : net.transitions) {
    if (t.name.empty()) throw NetError("empty transition name");
    if (++names[t.name] > 1) throw NetError("duplicate name: " + t.name);
    if (t.pre.empty() && t.post.empty())
      throw NetError("isolated transition: " + t.name);
    for (auto p : t.pre)
      if (p >= net.places.size()) throw NetError("arc references invalid place id");
    for (auto p : t.post)
      if (p >= net.places.size()) throw NetError("arc references invalid place id");
  }
  for (auto p : net.initial_marking.places)
    if (p >= net.places.size()) throw NetError("initial marking outside places");
}

bool enabled(const PetriNet& net, const Marking& m, std::uint32_t t) {
  for (auto p : net.transitions.at(t).pre)
    if (!m.contains(p)) return false;
  return true;
}

Marking fire(const PetriNet& net, const Marking& m, std::uint32_t t) {
  if (!enabled(net, m, t))
    throw NetError("transition not enabled: " + net.transitions.at(t).name);
  const auto& tr = net.transitions[t];
  Marking out = m;
  for (auto p : tr.pre) {
    bool in_post = std::binary_search(tr.post.begin(), tr.post.end(), p);
    if (!in_post) out.remove(p);
  }
  for (auto p : tr.post) {
    bool in_pre = std::binary_search(tr.pre.begin(), tr.pre.end(), p);
    if (!in_pre) out.add(p);
  }
  return out;
}

namespace {

// Multiset markings for the safety search; the set view is only valid for
// nets already known to be safe.
using Counts = std::vector<std::uint8_t>;

bool counts_enabled(const PetriNet& net, const Counts& m, std::uint32_t t) {
  for (auto p : net.transitions[t].pre)
    if (m[p] == 0) return false;
  return true;
}

}  // namespace

SafetyVerdict check_safety(const PetriNet& net, std::size_t state_limit) {
  Counts init(net.places.size(), 0);
  for (auto p : net.initial_marking.places) init[p] = 1;

  std::map<Counts, std::pair<Counts, std::uint32_t>> parent;  // state -> (pred, trans)
  std::map<Counts, bool> seen;
  std::queue<Counts> work;
  seen[init] = true;
  work.push(init);
  std::size_t explored = 1;

  auto build_run = [&](Counts state) {
    Run run;
    std::vector<std::uint32_t> rev_trans;
    std::vector<Counts> rev_states{state};
    while (true) {
      auto it = parent.find(state);
      if (it == parent.end()) break;
      rev_trans.push_back(it->second.second);
      state = it->second.first;
      rev_states.push_back(state);
    }
    std::reverse(rev_trans.begin(), rev_trans.end());
    std::reverse(rev_states.begin(), rev_states.end());
    run.transitions = rev_trans;
    for (const auto& s : rev_states) {
      Marking m;
      for (std::uint32_t p = 0; p < s.size(); ++p)
        if (s[p] > 0) m.add(p);
      run.markings.push_back(m);
    }
    return run;
  };

  while (!work.empty()) {
    Counts cur = work.front();
    work.pop();
    for (std::uint32_t t = 0; t < net.transitions.size(); ++t) {
      if (!counts_enabled(net, cur, t)) continue;
      Counts next = cur;
      const auto& tr = net.transitions[t];
      for (auto p : tr.pre) --next[p];
      for (auto p : tr.post) ++next[p];
      bool over = false;
      for (auto c : next)
        if (c > 1) over = true;
      if (over) {
        parent.emplace(next, std::make_pair(cur, t));
        return {SafetyVerdict::Kind::unsafe, build_run(next), explored};
      }
      if (seen.emplace(next, true).second) {
        parent.emplace(next, std::make_pair(cur, t));
        ++explored;
        if (explored > state_limit)
          return {SafetyVerdict::Kind::inconclusive, std::nullopt, explored};
        work.push(next);
      }
    }
  }
  return {SafetyVerdict::Kind::safe, std::nullopt, explored};
}

}  // namespace revelio
