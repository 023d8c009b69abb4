#pragma once

#include <string>
#include <string_view>

namespace soaccept::text {

// Porter (1980) suffix-stripping stemmer, steps 1a through 5b, following the
// reference implementation distributed with the algorithm (including its two
// documented departures: "bli" -> "ble" in step 2, and the extra "logi"
// rule). Words of one or two letters are returned unchanged.
// Input must be lowercase ASCII letters.
std::string porter_stem(std::string_view word);

}  // namespace soaccept::text
