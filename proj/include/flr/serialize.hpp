#pragma once

#include <string>

#include "flr/verify.hpp"

namespace flr {

// JSON codecs; all Dyadic fields round-trip bit-exactly.  Parsers throw
// std::invalid_argument with a path inside the document on schema errors.
std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

std::string certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const std::string& text);

std::string report_to_json(const ErrorReport& rep);
// Plotting view (lossy, binary64 columns): x1..xd, f, phi, abs_err.
// Requires a report measured with keep_records.
std::string report_to_csv(const ErrorReport& rep);

void save_text(const std::string& path, const std::string& text);
std::string load_text(const std::string& path);

}  // namespace flr
