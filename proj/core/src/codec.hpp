#pragma once

// JSON encoders/decoders for the model types, shared between the profile
// loader and the full model-config loader.

#include <string>
#include <vector>

#include "dram3d/electrical.hpp"
#include "dram3d/tech_profile.hpp"
#include "dram3d/topology.hpp"
#include "json_util.hpp"

namespace dram3d::detail {

Json to_json(const TechnologyProfile& p);
TechnologyProfile profile_from_json(const Json& j, const std::string& path);
std::vector<TechnologyProfile> profiles_from_json(const Json& list, const std::string& path);

Json to_json(const RoutingTopology& t);
RoutingTopology topology_from_json(const Json& j, const std::string& path);

Json to_json(const DisturbWorkload& w);
DisturbWorkload workload_from_json(const Json& j, const std::string& path);

Json to_json(const TimingModel& t);
TimingModel timing_from_json(const Json& j, const std::string& path);

}  // namespace dram3d::detail
