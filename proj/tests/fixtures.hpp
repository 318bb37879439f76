#pragma once

#include <cstdint>
#include <string>

#include "revelio/occurrence_net.hpp"
#include "revelio/petri_net.hpp"

namespace fixtures {

/// Running-example occurrence net: nine events a,b,c,d,e,f,g,h,k over
/// conditions 1..12. b competes with a and c for the initial conditions;
/// h and k compete for condition 8.
revelio::OccurrenceNet sample_occ();

/// Event id by name in a fixture net (throws if absent).
std::uint32_t ev(const revelio::OccurrenceNet& o, const std::string& name);

/// Cyclic safe net whose unfolding starts with sample_occ(): adds r,t,u
/// closing the cycle back to the initial marking.
revelio::PetriNet sample_cyclic_net();
std::string sample_cyclic_text();

/// One marked place, one transition consuming and reproducing it.
revelio::PetriNet self_loop_net();

/// Initial binary choice followed by two disjoint chains of `len` transitions;
/// acyclic, unfolds to exactly 2*len+2 events.
revelio::PetriNet two_branch_chain(std::uint32_t len);

}  // namespace fixtures
