#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revelio/occurrence_net.hpp"
#include "revelio/petri_net.hpp"

namespace revelio {

/// Exhaustive list of maximal configurations of a small occurrence net.
struct MaximalConfigSet {
  std::vector<EventSet> configs;
};

/// Depth-first canonical enumeration; throws NetError once more than `limit`
/// maximal configurations have been produced.
MaximalConfigSet enumerate_maximal(const OccurrenceNet& o, std::size_t limit = 10'000);

/// x reveals y by the definition: every maximal configuration containing x
/// contains y.
bool oracle_reveals(const MaximalConfigSet& mc, std::uint32_t x, std::uint32_t y);

/// Conflict row of e recomputed from the raw definition (distinct events with
/// intersecting presets in the causal pasts), independent of the pass code.
EventSet conflict_row_naive(const OccurrenceNet& o, std::uint32_t e);

struct RandomNetParams {
  std::uint32_t events = 8;
  std::uint32_t initial_conditions = 3;
  std::uint32_t place_kinds = 4;
  std::uint32_t transition_kinds = 5;
};

/// Seeded-deterministic valid occurrence net mixing forks, joins and
/// concurrent branches.
OccurrenceNet random_occurrence_net(std::uint64_t seed, const RandomNetParams& params = {});

/// Seeded-deterministic safe cyclic net: parallel token rings with shared
/// choice transitions; safe by construction (one token per ring).
PetriNet random_safe_net(std::uint64_t seed, std::uint32_t max_places = 8);

/// FNV-1a digest of the structure, for regression pinning.
std::uint64_t structural_digest(const OccurrenceNet& o);

}  // namespace revelio
