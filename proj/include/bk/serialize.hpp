#pragma once

#include <string>

#include <json.hpp>

#include "bk/csm.hpp"
#include "bk/fan.hpp"
#include "bk/maps.hpp"
#include "bk/matroid.hpp"

namespace bk {

using Json = nlohmann::ordered_json;

// {"labels":[...], "kind":"uniform|graphic|...", "data":{...}}; derived
// matroids are written out by their list of bases.
Json matroid_to_json(const Matroid& m);
Matroid matroid_from_json(const Json& j);

// {"rays":[{"coords":[...],"flat":[labels]|null,"rank":k|null}],
//  "cones":[[ray ids]...], "structure":"fine|nested|coarse|product"}
Json fan_to_json(const Fan& fan);

Json weight_to_json(const MinkowskiWeight& w);
MinkowskiWeight weight_from_json(const Json& j);

Json map_to_json(const LatticeMap& m);
LatticeMap map_from_json(const Json& j);

Json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const Json& j);

}  // namespace bk
