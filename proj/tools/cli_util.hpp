// Config-file parsing and CSV formatting for the command-line tool.
// Consumes only the public C API types.
#pragma once

#include "laacoex.h"

#include <stdexcept>
#include <string>

namespace laacli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Applies `key = value` lines ('#' starts a comment) over the built-in
// defaults. Unknown keys and malformed values throw ConfigError.
laacoex_sim_config parse_config(const std::string& text);
laacoex_sim_config load_config(const std::string& path);

// 6 significant digits, locale-independent.
std::string format_number(double value);

const char* scenario_label(const laacoex_params& params);

} // namespace laacli
