#include "revelio/unfolder.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "revelio/net_parse.hpp"

namespace revelio {

std::string CutoffPolicy::describe() const {
  switch (kind) {
    case Kind::level: return "level:" + std::to_string(value);
    case Kind::mcmillan: return "mcmillan";
    case Kind::height_bound: return "height:" + std::to_string(value);
    case Kind::event_bound: return "events:" + std::to_string(value);
  }
  return "?";
}

namespace {

struct PossibleExtension {
  std::uint32_t height;
  std::uint32_t trans;
  std::vector<std::uint32_t> preset;  // condition ids, ascending

  bool operator<(const PossibleExtension& o) const {
    if (height != o.height) return height < o.height;
    if (trans != o.trans) return trans < o.trans;
    return preset < o.preset;
  }
};

class Unfolder {
public:
  Unfolder(std::shared_ptr<const PetriNet> net, CutoffPolicy policy,
           const ResourceLimits& limits)
      : net_(std::move(net)), policy_(policy), limits_(limits) {}

  UnfoldingPrefix run() {
    validate(*net_);
    for (const auto& t : net_->transitions)
      if (t.pre.empty())
        throw UnsafeNetError("transition '" + t.name +
                             "' has an empty preset; it can fire unboundedly "
                             "often, so the net is not safe");
    occ_.place_names.reserve(net_->places.size());
    for (const auto& p : net_->places) occ_.place_names.push_back(p.name);
    for (const auto& t : net_->transitions) occ_.transition_names.push_back(t.name);

    for (auto p : net_->initial_marking.places) {
      auto c = occ_.add_condition(p);
      cond_height_.push_back(0);
      beyond_cutoff_.push_back(false);
      co_.emplace_back(c + 1);
      for (std::uint32_t d = 0; d < c; ++d) {
        co_[d].set(c);
        co_[c].set(d);
      }
      by_place_[p].push_back(c);
    }
    for (std::uint32_t c = 0; c < occ_.conditions.size(); ++c)
      generate_extensions(c);

    while (!worklist_.empty()) {
      auto pe = *worklist_.begin();
      worklist_.erase(worklist_.begin());
      if (policy_.kind == CutoffPolicy::Kind::height_bound &&
          pe.height > policy_.value)
        break;  // worklist pops are monotone in height
      if (policy_.kind == CutoffPolicy::Kind::event_bound &&
          occ_.events.size() >= policy_.value)
        break;
      check_limits();
      add_event(pe);
    }

    UnfoldingPrefix out;
    out.occ = std::move(occ_);
    out.net = net_;
    out.marking_of_event = std::move(marking_of_event_);
    out.event_height = std::move(event_height_);
    out.cutoff_level = std::move(level_of_);
    out.cutoff_events = std::move(cutoffs_);
    out.criterion = policy_;
    return out;
  }

private:
  void check_limits() {
    if (occ_.events.size() >= limits_.max_events)
      throw ResourceError("event limit exceeded (" +
                              std::to_string(limits_.max_events) + ")",
                          false);
    if (limits_.deadline && std::chrono::steady_clock::now() > *limits_.deadline)
      throw ResourceError("timeout during unfolding", true);
  }

  // Enumerates possible extensions whose newest preset condition is c:
  // partners are strictly older conditions concurrent with c and one another.
  void generate_extensions(std::uint32_t c) {
    if (beyond_cutoff_[c]) return;
    std::uint32_t place = occ_.conditions[c].label;
    for (std::uint32_t t = 0; t < net_->transitions.size(); ++t) {
      const auto& pre = net_->transitions[t].pre;
      if (!std::binary_search(pre.begin(), pre.end(), place)) continue;
      std::vector<std::uint32_t> needed;
      for (auto p : pre)
        if (p != place) needed.push_back(p);
      std::vector<std::uint32_t> chosen;
      search_coset(c, t, needed, 0, chosen);
    }
  }

  void search_coset(std::uint32_t c, std::uint32_t t,
                    const std::vector<std::uint32_t>& needed, std::size_t idx,
                    std::vector<std::uint32_t>& chosen) {
    if (idx == needed.size()) {
      PossibleExtension pe;
      pe.trans = t;
      pe.preset = chosen;
      pe.preset.push_back(c);
      std::sort(pe.preset.begin(), pe.preset.end());
      std::uint32_t h = 0;
      for (auto d : pe.preset) h = std::max(h, cond_height_[d]);
      pe.height = h + 1;
      worklist_.insert(std::move(pe));
      return;
    }
    auto it = by_place_.find(needed[idx]);
    if (it == by_place_.end()) return;
    for (auto cand : it->second) {
      if (cand >= c) break;  // older conditions only; lists are ascending
      if (beyond_cutoff_[cand]) continue;
      if (!co_[c].test(cand)) continue;
      bool ok = true;
      for (auto prev : chosen)
        if (!co_[prev].test(cand)) ok = false;
      if (!ok) continue;
      chosen.push_back(cand);
      search_coset(c, t, needed, idx + 1, chosen);
      chosen.pop_back();
    }
  }

  void add_event(const PossibleExtension& pe) {
    std::uint32_t e = occ_.add_event(pe.trans, pe.preset);
    event_height_.push_back(pe.height);

    // Post conditions plus their concurrency rows.
    EventSet inter;
    bool first = true;
    for (auto d : pe.preset) {
      if (first) {
        inter = co_[d];
        first = false;
      } else {
        inter &= co_[d];
      }
    }
    for (auto d : pe.preset) inter.reset(d);

    std::vector<std::uint32_t> fresh;
    for (auto p : net_->transitions[pe.trans].post) {
      auto c = occ_.add_condition(p, e);
      cond_height_.push_back(pe.height);
      beyond_cutoff_.push_back(false);  // patched below once cutoff is known
      co_.emplace_back(c + 1);
      fresh.push_back(c);
    }

    // Causal past of e, for M_e and the cutoff-level recursion.
    EventSet past = cone(occ_, e).events;
    Marking m_e = mark_of(past);
    marking_of_event_.push_back(m_e);

    std::uint32_t lvl = 0;
    if (m_e == net_->initial_marking) lvl = 1;
    past.for_each([&](std::uint32_t e2) {
      if (e2 == e) return;
      if (marking_of_event_[e2] == m_e)
        lvl = std::max(lvl, std::max<std::uint32_t>(1, level_of_[e2] + 1));
    });
    level_of_.push_back(lvl);

    bool cutoff = false;
    switch (policy_.kind) {
      case CutoffPolicy::Kind::level:
        cutoff = lvl >= policy_.value;
        break;
      case CutoffPolicy::Kind::mcmillan: {
        std::size_t cone_size = past.count();
        if (m_e == net_->initial_marking) {
          cutoff = true;
        } else {
          auto it = min_cone_size_.find(m_e.places);
          cutoff = it != min_cone_size_.end() && it->second < cone_size;
        }
        auto [it, inserted] = min_cone_size_.emplace(m_e.places, cone_size);
        if (!inserted && cone_size < it->second) it->second = cone_size;
        break;
      }
      case CutoffPolicy::Kind::height_bound:
      case CutoffPolicy::Kind::event_bound:
        break;
    }
    if (cutoff) cutoffs_.set(e);
    cutoffs_.resize(occ_.events.size());
    for (auto c : fresh) beyond_cutoff_[c] = cutoff;
    for (auto c : fresh) {
      inter.for_each([&](std::uint32_t b) {
        co_[c].set(b);
        co_[b].set(c);
      });
      for (auto sib : fresh)
        if (sib != c) co_[c].set(sib);
    }
    for (auto c : fresh) {
      // Two concurrent conditions with one place label witness 1-unsafety.
      std::uint32_t place = occ_.conditions[c].label;
      bool clash = false;
      std::uint32_t other = 0;
      co_[c].for_each([&](std::uint32_t b) {
        if (!clash && occ_.conditions[b].label == place) {
          clash = true;
          other = b;
        }
      });
      if (clash)
        throw UnsafeNetError(
            "net is not safe: place '" + occ_.place_names[place] +
            "' carries two concurrent tokens (conditions c" + std::to_string(c) +
            ", c" + std::to_string(other) + ")");
      by_place_[place].push_back(c);
    }
    if (!cutoff)
      for (auto c : fresh) generate_extensions(c);
  }

  Marking mark_of(const EventSet& cfg) {
    EventSet consumed(occ_.conditions.size());
    EventSet present(occ_.conditions.size());
    for (auto c : occ_.initial_conditions) present.set(c);
    cfg.for_each([&](std::uint32_t e) {
      for (auto c : occ_.events[e].pre) consumed.set(c);
      for (auto c : occ_.events[e].post) present.set(c);
    });
    present.subtract(consumed);
    Marking m;
    present.for_each([&](std::uint32_t c) { m.add(occ_.conditions[c].label); });
    return m;
  }

  std::shared_ptr<const PetriNet> net_;
  CutoffPolicy policy_;
  ResourceLimits limits_;

  OccurrenceNet occ_;
  std::vector<EventSet> co_;                  // per condition, over conditions
  std::vector<std::uint32_t> cond_height_;    // producer height, 0 for initial
  std::vector<char> beyond_cutoff_;
  std::map<std::uint32_t, std::vector<std::uint32_t>> by_place_;
  std::vector<Marking> marking_of_event_;
  std::vector<std::uint32_t> event_height_;
  std::vector<std::uint32_t> level_of_;
  EventSet cutoffs_;
  std::map<std::vector<std::uint32_t>, std::size_t> min_cone_size_;
  std::set<PossibleExtension> worklist_;
};

}  // namespace

UnfoldingPrefix unfold(std::shared_ptr<const PetriNet> net, CutoffPolicy policy,
                       const ResourceLimits& limits) {
  if (policy.kind == CutoffPolicy::Kind::level && policy.value < 1)
    throw NetError("cutoff level must be >= 1");
  Unfolder u(std::move(net), policy, limits);
  return u.run();
}

UnfoldingPrefix unfold(const PetriNet& net, CutoffPolicy policy,
                       const ResourceLimits& limits) {
  return unfold(std::make_shared<PetriNet>(net), policy, limits);
}

std::pair<EventSet, EventSet> level_cutoffs(const UnfoldingPrefix& p,
                                            std::uint32_t i) {
  EventSet li(p.occ.events.size());
  for (std::uint32_t e = 0; e < p.occ.events.size(); ++e)
    if (p.cutoff_level[e] >= i) li.set(e);
  EventSet li_min(p.occ.events.size());
  li.for_each([&](std::uint32_t e) {
    bool minimal = true;
    precone(p.occ, e).events.for_each([&](std::uint32_t e2) {
      if (li.test(e2)) minimal = false;
    });
    if (minimal) li_min.set(e);
  });
  return {li, li_min};
}

UnfoldingPrefix exact_ui(const UnfoldingPrefix& p, std::uint32_t i) {
  auto [li, li_min] = level_cutoffs(p, i);
  (void)li;
  EventSet keep(p.occ.events.size());
  li_min.for_each([&](std::uint32_t e) { keep |= cone(p.occ, e).events; });

  UnfoldingPrefix out;
  out.net = p.net;
  out.criterion = p.criterion;
  out.occ.place_names = p.occ.place_names;
  out.occ.transition_names = p.occ.transition_names;

  std::vector<std::uint32_t> emap(p.occ.events.size(), UINT32_MAX);
  std::vector<std::uint32_t> cmap(p.occ.conditions.size(), UINT32_MAX);
  // Conditions of the prefix: initial ones plus posts of kept events.
  EventSet keep_cond(p.occ.conditions.size());
  for (auto c : p.occ.initial_conditions) keep_cond.set(c);
  keep.for_each([&](std::uint32_t e) {
    for (auto c : p.occ.events[e].post) keep_cond.set(c);
  });
  keep_cond.for_each([&](std::uint32_t c) {
    cmap[c] = static_cast<std::uint32_t>(out.occ.conditions.size());
    out.occ.conditions.push_back({p.occ.conditions[c].label, std::nullopt, {}});
  });
  keep.for_each([&](std::uint32_t e) {
    emap[e] = static_cast<std::uint32_t>(out.occ.events.size());
    out.occ.events.push_back({p.occ.events[e].label, {}, {}});
    out.marking_of_event.push_back(p.marking_of_event[e]);
    out.event_height.push_back(p.event_height[e]);
    out.cutoff_level.push_back(p.cutoff_level[e]);
  });
  keep.for_each([&](std::uint32_t e) {
    for (auto c : p.occ.events[e].pre) {
      out.occ.events[emap[e]].pre.push_back(cmap[c]);
      out.occ.conditions[cmap[c]].consumers.push_back(emap[e]);
    }
    for (auto c : p.occ.events[e].post) {
      out.occ.events[emap[e]].post.push_back(cmap[c]);
      out.occ.conditions[cmap[c]].producer = emap[e];
    }
  });
  out.occ.refresh_initial();
  out.cutoff_events = EventSet(out.occ.events.size());
  for (std::uint32_t e = 0; e < out.occ.events.size(); ++e)
    if (out.cutoff_level[e] >= i) out.cutoff_events.set(e);
  return out;
}

std::uint32_t bound_k(const PetriNet& net, const ResourceLimits& limits) {
  auto p = unfold(net, CutoffPolicy::level(2), limits);
  auto u2 = exact_ui(p, 2);
  return prefix_height(u2.occ);
}

std::string dump_prefix(const OccurrenceNet& occ, const EventSet& cutoffs,
                        const std::string& name) {
  std::ostringstream out;
  out << "# prefix " << name << "\n";
  for (std::uint32_t c = 0; c < occ.conditions.size(); ++c) {
    out << "c" << c << " " << occ.condition_name(c) << " ";
    if (occ.conditions[c].producer)
      out << "e" << *occ.conditions[c].producer;
    else
      out << "-";
    out << "\n";
  }
  for (std::uint32_t e = 0; e < occ.events.size(); ++e) {
    out << "e" << e << " " << occ.event_name(e) << " pre={";
    const auto& ev = occ.events[e];
    for (std::size_t i = 0; i < ev.pre.size(); ++i)
      out << (i ? "," : "") << "c" << ev.pre[i];
    out << "} post={";
    for (std::size_t i = 0; i < ev.post.size(); ++i)
      out << (i ? "," : "") << "c" << ev.post[i];
    out << "}";
    if (cutoffs.test(e)) out << " cutoff";
    out << "\n";
  }
  return out.str();
}

std::string dump_prefix(const UnfoldingPrefix& p) {
  return dump_prefix(p.occ, p.cutoff_events, p.net ? p.net->name : "prefix");
}

namespace {

std::uint32_t parse_node_id(const std::string& tok, char kind, int lineno) {
  if (tok.size() < 2 || tok[0] != kind)
    throw ParseError(lineno, "expected node id starting with '" +
                                 std::string(1, kind) + "': " + tok);
  return static_cast<std::uint32_t>(std::stoul(tok.substr(1)));
}

std::vector<std::uint32_t> parse_id_list(const std::string& tok, char kind,
                                         const std::string& key, int lineno) {
  auto eq = tok.find('=');
  if (eq == std::string::npos || tok.substr(0, eq) != key ||
      tok[eq + 1] != '{' || tok.back() != '}')
    throw ParseError(lineno, "expected " + key + "={...}");
  std::vector<std::uint32_t> out;
  std::string body = tok.substr(eq + 2, tok.size() - eq - 3);
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty()) out.push_back(parse_node_id(item, kind, lineno));
  return out;
}

}  // namespace

PrefixDump parse_prefix(const std::string& text) {
  PrefixDump dump;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, std::uint32_t> place_label, trans_label;
  struct PendingCond { std::string name; std::optional<std::uint32_t> producer; };
  std::vector<PendingCond> conds;

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind("# prefix", 0) == 0) {
      dump.name = line.size() > 9 ? line.substr(9) : "prefix";
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string tok;
    while (ls >> tok) toks.push_back(tok);
    if (toks.empty()) continue;
    if (toks[0][0] == 'c') {
      if (toks.size() != 3) throw ParseError(lineno, "malformed condition line");
      auto id = parse_node_id(toks[0], 'c', lineno);
      if (id != conds.size())
        throw ParseError(lineno, "condition ids must be dense and in order");
      PendingCond pc;
      pc.name = toks[1];
      if (toks[2] != "-") pc.producer = parse_node_id(toks[2], 'e', lineno);
      conds.push_back(pc);
    } else if (toks[0][0] == 'e') {
      if (toks.size() < 4) throw ParseError(lineno, "malformed event line");
      auto id = parse_node_id(toks[0], 'e', lineno);
      if (id != dump.occ.events.size())
        throw ParseError(lineno, "event ids must be dense and in order");
      auto [it, fresh] = trans_label.emplace(
          toks[1], static_cast<std::uint32_t>(dump.occ.transition_names.size()));
      if (fresh) dump.occ.transition_names.push_back(toks[1]);
      EventNode ev;
      ev.label = it->second;
      ev.pre = parse_id_list(toks[2], 'c', "pre", lineno);
      ev.post = parse_id_list(toks[3], 'c', "post", lineno);
      std::sort(ev.pre.begin(), ev.pre.end());
      std::sort(ev.post.begin(), ev.post.end());
      dump.occ.events.push_back(ev);
      if (toks.size() == 5 && toks[4] == "cutoff") dump.cutoffs.set(id);
      else if (toks.size() > 4) throw ParseError(lineno, "malformed event line");
    } else {
      throw ParseError(lineno, "unexpected line in prefix dump");
    }
  }
  for (std::uint32_t c = 0; c < conds.size(); ++c) {
    auto [it, fresh] = place_label.emplace(
        conds[c].name, static_cast<std::uint32_t>(dump.occ.place_names.size()));
    if (fresh) dump.occ.place_names.push_back(conds[c].name);
    dump.occ.conditions.push_back({it->second, conds[c].producer, {}});
  }
  for (std::uint32_t e = 0; e < dump.occ.events.size(); ++e)
    for (auto c : dump.occ.events[e].pre) {
      if (c >= dump.occ.conditions.size())
        throw ParseError(0, "event references undeclared condition");
      dump.occ.conditions[c].consumers.push_back(e);
    }
  for (std::uint32_t e = 0; e < dump.occ.events.size(); ++e)
    for (auto c : dump.occ.events[e].post) {
      if (c >= dump.occ.conditions.size())
        throw ParseError(0, "event references undeclared condition");
      if (dump.occ.conditions[c].producer != e)
        throw ParseError(0, "condition producer disagrees with event post list");
    }
  dump.occ.refresh_initial();
  dump.cutoffs.resize(dump.occ.events.size());
  validate(dump.occ);
  return dump;
}

void check_homomorphism(const UnfoldingPrefix& p) {
  const auto& o = p.occ;
  const auto& net = *p.net;
  // Initial conditions biject onto M0.
  Marking init_labels;
  for (auto c : o.initial_conditions) {
    if (init_labels.contains(o.conditions[c].label))
      throw NetError("two initial conditions share a place label");
    init_labels.add(o.conditions[c].label);
  }
  if (!(init_labels == net.initial_marking))
    throw NetError("initial conditions do not biject onto the initial marking");
  // f restricted to pre(e)/post(e) bijects onto pre/post of the transition.
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    const auto& tr = net.transitions[o.events[e].label];
    auto labels_of = [&](const std::vector<std::uint32_t>& cs) {
      std::vector<std::uint32_t> ls;
      for (auto c : cs) ls.push_back(o.conditions[c].label);
      std::sort(ls.begin(), ls.end());
      return ls;
    };
    if (labels_of(o.events[e].pre) != tr.pre)
      throw NetError("event preset does not biject onto transition preset");
    if (labels_of(o.events[e].post) != tr.post)
      throw NetError("event postset does not biject onto transition postset");
  }
  // No two events share label and preset.
  std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen;
  for (std::uint32_t e = 0; e < o.events.size(); ++e)
    if (!seen.emplace(o.events[e].label, o.events[e].pre).second)
      throw NetError("two events share label and preset");
  // Cached markings agree with Mark(cone(e)).
  for (std::uint32_t e = 0; e < o.events.size(); ++e) {
    auto [cut, mark] = cut_and_mark(o, cone(o, e));
    (void)cut;
    if (!(mark == p.marking_of_event[e]))
      throw NetError("cached event marking disagrees with Mark(cone(e))");
  }
}

}  // namespace revelio
