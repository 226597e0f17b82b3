#pragma once

#include <json.hpp>

#include "dg/dyadic.hpp"

namespace dg {

/**
 * Serializes a series as
 *   {"session": id, "terms": [{"gens": [ids], "re":, "im":}, ...],
 *    "dropped_l2":, "dropped_l1":}
 * with terms in sorted character order.
 */
nlohmann::json series_to_json(const WalshSeries& f);

WalshSeries series_from_json(const nlohmann::json& j);

}  // namespace dg
