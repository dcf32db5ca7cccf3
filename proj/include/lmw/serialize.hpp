#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "lmw/bandtree.hpp"
#include "lmw/lmw.hpp"
#include "lmw/metrics.hpp"
#include "lmw/phantom.hpp"
#include "lmw/pipeline.hpp"

namespace lmw {

using Json = nlohmann::ordered_json;

Json to_json(const Contour& contour);
Json contours_to_json(const std::vector<Contour>& contours);
Json tree_to_json(const BandTree& tree);
Json to_json(const MetricsReport& report);
Json to_json(const ObjectStats& object);
Json to_json(const PhantomSpec& spec);

/// Missing fields keep the kind's defaults. Throws SpecError on unknown kinds or bad types.
PhantomSpec phantom_spec_from_json(const Json& j);

/// Compact, newline-terminated dump; identical inputs give identical bytes.
std::string dump(const Json& j);

}  // namespace lmw
