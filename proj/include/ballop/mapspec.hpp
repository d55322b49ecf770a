#pragma once

#include <string>

#include "json.hpp"

#include "ballop/lft.hpp"
#include "ballop/space_spec.hpp"

namespace ballop {

using Json = nlohmann::ordered_json;

/// Map-spec JSON:
///   {"N": 2, "A": [[[re,im],...],...], "B": [[re,im],...],
///    "C": [[re,im],...], "d": [re,im]}
/// plus the convenience forms
///   {"kind":"automorphism","a":[...]}, {"kind":"unitary","U":[[...]]},
///   {"kind":"disk","a":..,"b":..,"c":..,"d":..}.
/// Scalars may be plain numbers or [re,im] pairs.
LinearFractionalMap parse_map_spec(const Json& spec);

/// Accepts inline JSON (first non-space character '{') or a file path.
LinearFractionalMap load_map_spec(const std::string& inline_or_path);

Json map_to_json(const LinearFractionalMap& map);

Json cplx_to_json(Cplx z);

SpaceSpec parse_space(const std::string& kind, int dim, double s);

}  // namespace ballop
