#pragma once

#include <json.hpp>

#include "nlbound/bounds.hpp"
#include "nlbound/box.hpp"
#include "nlbound/decompose.hpp"
#include "nlbound/protocol.hpp"

namespace nlbound {

using Json = nlohmann::ordered_json;

/// {"p": [[[4 entries], [4 entries]], [[...], [...]]]} indexed [x][y], entries
/// ordered (a,b) = 00, 01, 10, 11. Entries are "n/d" strings, decimals or integers.
Json box_to_json(const BinarySystem& p);
/// Throws std::invalid_argument on malformed input. Does not validate the system.
BinarySystem box_from_json(const Json& j);

Json protocol_to_json(const Protocol& protocol);
Protocol protocol_from_json(const Json& j);

Json validation_to_json(const ValidationReport& report);
Json decomposition_to_json(const Decomposition& d);
Json bound_to_json(const BoundReport& r);
Json search_to_json(const SearchReport& r);

}  // namespace nlbound
