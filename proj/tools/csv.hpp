#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toasync/toasync.h"

#include "config.hpp"

namespace toasync_cli {

// Shortest exact decimal representation (round-trips to the same double).
std::string format_double(double v);

// Writes `text` to `path`, throwing DataError on failure.
void write_file(const std::string& path, const std::string& text);

std::string read_file(const std::string& path);

// Measurement CSV: header `k,z11,z12,z21,z22`, k contiguous from 1.
// Diagnostics name the offending line or column.
std::vector<toasync_frame> parse_measurements_csv(const std::string& text);
std::string measurements_to_csv(const std::vector<toasync_frame>& frames);

}  // namespace toasync_cli
