#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "revelio/event_set.hpp"
#include "revelio/petri_net.hpp"

namespace revelio {

struct ConditionNode {
  std::uint32_t label = 0;  // place id
  std::optional<std::uint32_t> producer;
  std::vector<std::uint32_t> consumers;  // event ids, ascending
};

struct EventNode {
  std::uint32_t label = 0;  // transition id
  std::vector<std::uint32_t> pre;   // condition ids, ascending
  std::vector<std::uint32_t> post;  // condition ids, ascending
};

/// Finite occurrence net. Condition labels index place_names, event labels
/// index transition_names; a standalone net is its own unfolding (each node
/// labelled by itself).
struct OccurrenceNet {
  std::vector<ConditionNode> conditions;
  std::vector<EventNode> events;
  std::vector<std::uint32_t> initial_conditions;  // ascending
  std::vector<std::string> place_names;
  std::vector<std::string> transition_names;

  const std::string& condition_name(std::uint32_t c) const {
    return place_names.at(conditions.at(c).label);
  }
  const std::string& event_name(std::uint32_t e) const {
    return transition_names.at(events.at(e).label);
  }

  std::uint32_t add_condition(std::uint32_t label,
                              std::optional<std::uint32_t> producer = std::nullopt);
  /// Adds an event consuming `pre`; wires consumer links. Post conditions are
  /// added separately with this event as producer.
  std::uint32_t add_event(std::uint32_t label, std::vector<std::uint32_t> pre);
  /// Recomputes initial_conditions as the producer-free conditions.
  void refresh_initial();
};

/// Checks the occurrence-net axioms (acyclicity, backward branching,
/// self-conflict freeness, minimal conditions). Throws NetError.
void validate(const OccurrenceNet& o);

/// H(e) for all events; throws NetError on a flow cycle.
std::vector<std::uint32_t> event_heights(const OccurrenceNet& o);
std::uint32_t height(const OccurrenceNet& o, std::uint32_t e);
std::uint32_t prefix_height(const OccurrenceNet& o);

/// Event ids sorted by (height, id); causality-respecting and deterministic.
std::vector<std::uint32_t> topological_order(const OccurrenceNet& o);

enum class NodeRelation { equal, causal, conflict, concurrent };

/// Trichotomy classification for a pair of conditions.
NodeRelation relation_of(const OccurrenceNet& o, std::uint32_t c, std::uint32_t c2);

struct Configuration {
  EventSet events;
};

Configuration cone(const OccurrenceNet& o, std::uint32_t e);
Configuration precone(const OccurrenceNet& o, std::uint32_t e);

bool is_configuration(const OccurrenceNet& o, const EventSet& events);

/// Cut (maximal conditions of O[C]) and its marking (place labels of the cut).
std::pair<std::vector<std::uint32_t>, Marking> cut_and_mark(const OccurrenceNet& o,
                                                            const Configuration& c);

/// Derived view for tests: the net re-rooted at Cut(C).
OccurrenceNet postfix(const OccurrenceNet& o, const Configuration& c);

/// Token-game view: conditions as places, events as transitions.
PetriNet as_petri_net(const OccurrenceNet& o);

/// DOT export; cutoff events, when given, are drawn double-bordered.
std::string to_dot(const OccurrenceNet& o, const EventSet* cutoffs = nullptr);

}  // namespace revelio
