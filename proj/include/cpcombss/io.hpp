#pragma once

#include <string>
#include <vector>

#include "cpcombss/simgen.hpp"

// Small file/format helpers shared by the CLI and the harness.

namespace cpcombss {

/// Shortest round-trippable decimal ("%.17g" fallback from "%.10g" is not
/// needed here; outputs are stable because the values themselves are
/// deterministic).  nan/inf render as "nan"/"inf"/"-inf".
std::string format_double(double x);

/// Reads a single-column numeric CSV; an optional leading header "y" is
/// skipped; blank lines are ignored.  Throws std::runtime_error on missing
/// files, non-numeric rows, or when no values remain.
std::vector<double> read_y_csv(const std::string& path);

/// Writes one value per line under a "y" header.
void write_y_csv(const std::string& path, const std::vector<double>& y);

std::string to_json(const SignalSpec& spec, int indent = 2);
SignalSpec signal_spec_from_json(const std::string& text);  // validates
SignalSpec read_signal_spec(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace cpcombss
