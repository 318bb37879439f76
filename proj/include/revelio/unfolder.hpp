#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "revelio/occurrence_net.hpp"
#include "revelio/petri_net.hpp"

namespace revelio {

struct CutoffPolicy {
  enum class Kind { level, mcmillan, height_bound, event_bound } kind = Kind::level;
  std::uint32_t value = 1;

  static CutoffPolicy level(std::uint32_t i) { return {Kind::level, i}; }
  static CutoffPolicy mcmillan() { return {Kind::mcmillan, 0}; }
  static CutoffPolicy height_bound(std::uint32_t h) { return {Kind::height_bound, h}; }
  static CutoffPolicy event_bound(std::uint32_t n) { return {Kind::event_bound, n}; }
  std::string describe() const;
};

struct ResourceLimits {
  std::size_t max_events = 1'000'000;
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct ResourceError : std::runtime_error {
  ResourceError(const std::string& what, bool timeout)
      : std::runtime_error(what), timeout(timeout) {}
  bool timeout;
};

struct UnsafeNetError : NetError {
  using NetError::NetError;
};

/// Prefix of the unfolding of a safe net. Event ids are assigned in worklist
/// pop order, which is monotone in height; id order is a topological order.
struct UnfoldingPrefix {
  OccurrenceNet occ;
  std::shared_ptr<const PetriNet> net;
  std::vector<Marking> marking_of_event;   // M_e = Mark(cone(e))
  std::vector<std::uint32_t> event_height;
  std::vector<std::uint32_t> cutoff_level;  // max i with e in L_i, 0 if none
  EventSet cutoff_events;
  CutoffPolicy criterion;
};

UnfoldingPrefix unfold(const PetriNet& net, CutoffPolicy policy,
                       const ResourceLimits& limits = {});
UnfoldingPrefix unfold(std::shared_ptr<const PetriNet> net, CutoffPolicy policy,
                       const ResourceLimits& limits = {});

/// (L_i, L_i^min) over the prefix's events.
std::pair<EventSet, EventSet> level_cutoffs(const UnfoldingPrefix& p, std::uint32_t i);

/// Restriction of p to the cone union of L_i^min (the exact U_i prefix).
UnfoldingPrefix exact_ui(const UnfoldingPrefix& p, std::uint32_t i);

/// K = height(exact U_2). Throws ResourceError if limits are exceeded.
std::uint32_t bound_k(const PetriNet& net, const ResourceLimits& limits = {});

/// Deterministic text dump ("# prefix" header).
std::string dump_prefix(const UnfoldingPrefix& p);

struct PrefixDump {
  OccurrenceNet occ;
  EventSet cutoffs;
  std::string name;
};

PrefixDump parse_prefix(const std::string& text);
std::string dump_prefix(const OccurrenceNet& occ, const EventSet& cutoffs,
                        const std::string& name);

/// Post-construction check of the unfolding homomorphism laws. Throws NetError.
void check_homomorphism(const UnfoldingPrefix& p);

}  // namespace revelio
