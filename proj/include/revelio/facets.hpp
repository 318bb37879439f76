#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "revelio/occurrence_net.hpp"
#include "revelio/reveals.hpp"

namespace revelio {

/// Partition of the events into facets: the strongly connected components of
/// the reveals relation, i.e. classes of mutual revelation.
struct FacetPartition {
  std::vector<EventSet> classes;         // condensation topological order
  std::vector<std::uint32_t> class_of;   // per event
};

FacetPartition compute_facets(const RevealsMatrix& m);

/// Contracts each facet to a single event. A condition is dropped iff its
/// producer and all consumers lie in one facet and it has at least one
/// consumer; merged events are named by joining member labels in topological
/// order within the facet.
OccurrenceNet quotient(const OccurrenceNet& o, const FacetPartition& p);

/// One line per facet: `facet <index>: {<event names>}`, members in id order.
std::string facet_listing(const OccurrenceNet& o, const FacetPartition& p);

/// DOT export of a quotient; facet events are drawn as wide boxes.
std::string quotient_to_dot(const OccurrenceNet& q);

}  // namespace revelio
