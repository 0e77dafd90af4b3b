#pragma once

#include "patankar/schemes.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace patankar {

/// Parses "family[:key=value,...]", e.g. "mprk22:alpha=1" or
/// "mpdec:order=5,nodes=gl". Throws InvalidScheme naming the offending token.
SchemeSpec parse_scheme(const std::string& text);

/// Canonical text form; parse_scheme(format_scheme(s)) == s.
std::string format_scheme(const SchemeSpec& spec);

/// Shortest decimal string that reads back to the same double.
std::string format_real(double x);

/// Entry point of the command-line runner. Returns 0 on success, 2 on a
/// configuration error and 3 on a numerical failure.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace patankar
