#pragma once

#include <json.hpp>

#include "sosb/boundary.hpp"
#include "sosb/rankloci.hpp"
#include "sosb/symmetroid.hpp"
#include "sosb/witness.hpp"

namespace sosb {

using Json = nlohmann::ordered_json;

Json to_json(const Polynomial& p);
Polynomial polynomial_from_json(const Json& j);

Json to_json(const PolySystem& sys);
PolySystem system_from_json(const Json& j);

Json to_json(const Point& p);
Point point_from_json(const Json& j);

Json to_json(const TrackerConfig& cfg);
TrackerConfig tracker_config_from_json(const Json& j);

Json to_json(const PathCounts& counts);
Json to_json(const SolutionSet& sol);
Json to_json(const WitnessSet& ws);
WitnessSet witness_set_from_json(const Json& j);  // reload for membership queries
Json to_json(const Decomposition& dec);
Json to_json(const RankLocusReport& rep);
Json to_json(const BoundarySolveReport& rep);
Json to_json(const DetRep& rep);

// integers as JSON numbers when exactly representable, strings past 2^53
Json bigint_json(const BigInt& v);

}  // namespace sosb
