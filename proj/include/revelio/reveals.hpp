#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "revelio/event_set.hpp"
#include "revelio/occurrence_net.hpp"
#include "revelio/unfolder.hpp"

namespace revelio {

/// Output of the three passes over a finite occurrence net.
/// rev rows are exact for events of height <= trusted_height; on a strict
/// prefix of a deeper unfolding deeper rows may miss witnesses.
struct RevealsMatrix {
  std::vector<EventSet> post;  // {e' | e <= e'}
  std::vector<EventSet> conf;  // {e' | e # e'}
  std::vector<EventSet> rev;   // {e' | e reveals e'}
  std::uint32_t trusted_height = 0;
  std::vector<std::uint32_t> heights;
};

struct RevealsOptions {
  unsigned threads = 1;
  /// Use the rev-superset candidate test instead of the conflict-set
  /// superset test; an under-approximation, for differential runs only.
  bool rev_superset_variant = false;
};

struct PassTimings {
  double post_s = 0, conf_s = 0, rev_s = 0;
};

std::vector<EventSet> pass1_post(const OccurrenceNet& o,
                                 const std::vector<std::uint32_t>& topo);
std::vector<EventSet> pass2_conf(const OccurrenceNet& o,
                                 const std::vector<std::uint32_t>& topo,
                                 const std::vector<EventSet>& post);
std::vector<EventSet> pass3_rev(const OccurrenceNet& o,
                                const std::vector<std::uint32_t>& topo,
                                const std::vector<EventSet>& conf,
                                const RevealsOptions& opts = {});

/// Runs the three passes. If k is given, o is taken as a prefix of a deeper
/// unfolding and trusted_height = prefix_height - k; otherwise the net is its
/// own complete unfolding and every row is trusted.
RevealsMatrix reveals_all(const OccurrenceNet& o,
                          std::optional<std::uint32_t> k = std::nullopt,
                          const RevealsOptions& opts = {},
                          PassTimings* timings = nullptr);

/// W(x,y,z) := (z # y) and not (z # x).
bool witness_predicate(const RevealsMatrix& m, std::uint32_t x, std::uint32_t y,
                       std::uint32_t z);

/// <-minimal events of the conflict set of y.
EventSet root_conflicts(const OccurrenceNet& o, std::uint32_t y);

struct WitnessReport {
  bool found = false;
  std::optional<std::uint32_t> witness;
  std::size_t explored = 0;
  std::uint32_t height_bound_used = 0;
};

struct PairVerdict {
  bool reveals = false;
  WitnessReport report;
};

/// Event selector for check_pair: an event id of the deterministic unfolding,
/// the earliest instance of a named transition, or the instance reached by a
/// firing sequence of transition names.
struct EventSelector {
  static EventSelector by_id(std::uint32_t id) { return {id, {}, {}}; }
  static EventSelector by_name(std::string name) { return {{}, std::move(name), {}}; }
  static EventSelector by_firing(std::vector<std::string> seq) {
    return {{}, {}, std::move(seq)};
  }
  std::optional<std::uint32_t> id;
  std::optional<std::string> name;
  std::optional<std::vector<std::string>> firing;
};

/// Decides x reveals y via bounded witness search on a prefix of height
/// max(H(x),H(y)) + K. Exact; throws ResourceError on exhaustion.
PairVerdict check_pair(const PetriNet& net, const EventSelector& x,
                       const EventSelector& y, const ResourceLimits& limits = {});

/// CSV export: `event,reveals,conflicts,successors` with space-separated ids.
std::string matrix_to_csv(const RevealsMatrix& m);

/// Binary dump: magic RVL1, little-endian u32 event count, then row-major bit
/// rows, post/conf/rev in that order.
std::vector<std::uint8_t> matrix_to_binary(const RevealsMatrix& m);
RevealsMatrix matrix_from_binary(const std::vector<std::uint8_t>& bytes);

}  // namespace revelio
