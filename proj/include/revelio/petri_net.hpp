#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace revelio {

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Marking of a safe net: a set of place ids, kept sorted and duplicate-free.
struct Marking {
  std::vector<std::uint32_t> places;

  Marking() = default;
  explicit Marking(std::vector<std::uint32_t> p);

  bool contains(std::uint32_t p) const;
  void add(std::uint32_t p);
  void remove(std::uint32_t p);
  bool operator==(const Marking&) const = default;
  bool operator<(const Marking& o) const { return places < o.places; }
};

struct Place {
  std::string name;
};

struct Transition {
  std::string name;
  std::vector<std::uint32_t> pre;   // sorted place ids
  std::vector<std::uint32_t> post;  // sorted place ids
};

/// Safe Petri net. Ids are dense 0-based indices in declaration order.
struct PetriNet {
  std::string name;
  std::vector<Place> places;
  std::vector<Transition> transitions;
  Marking initial_marking;

  std::optional<std::uint32_t> place_id(std::string_view name) const;
  std::optional<std::uint32_t> transition_id(std::string_view name) const;

  std::uint32_t add_place(const std::string& name);
  std::uint32_t add_transition(const std::string& name);

private:
  std::unordered_map<std::string, std::uint32_t> place_index_;
  std::unordered_map<std::string, std::uint32_t> transition_index_;
};

/// Structural validation: unique non-empty names, no isolated transitions,
/// initial marking within bounds. Throws NetError.
void validate(const PetriNet& net);

struct Run {
  std::vector<std::uint32_t> transitions;
  std::vector<Marking> markings;  // length transitions.size()+1
};

bool enabled(const PetriNet& net, const Marking& m, std::uint32_t t);

/// Fires t in m. Throws NetError if t is not enabled.
Marking fire(const PetriNet& net, const Marking& m, std::uint32_t t);

struct SafetyVerdict {
  enum class Kind { safe, unsafe, inconclusive } kind;
  std::optional<Run> witness;  // set for unsafe: run reaching a 2-token place
  std::size_t explored = 0;    // distinct markings visited
};

/// Explicit-state exploration up to state_limit distinct markings.
SafetyVerdict check_safety(const PetriNet& net, std::size_t state_limit);

}  // namespace revelio
