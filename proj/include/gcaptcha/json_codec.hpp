#pragma once

#include <json.hpp>

#include "gcaptcha/challenge.hpp"
#include "gcaptcha/geometry.hpp"

namespace gcaptcha {

using json = nlohmann::ordered_json;

// Wire and file encodings. Key order is fixed so serialized documents are
// byte-stable.
json to_json(const Region& r);
json to_json(const Size& s);
json to_json(const TimedPoint& p);
json to_json(const SceneObject& o);
json to_json(const ChallengeSpec& spec);
json to_json(const GameTemplate& t);

}  // namespace gcaptcha

namespace gcaptcha {

// Client-side decoding of a served scene; throws ParseError.
[[nodiscard]] ChallengeSpec parse_challenge_spec(const json& doc);

}  // namespace gcaptcha
