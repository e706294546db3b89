#pragma once

#include <string>
#include <vector>

namespace zwise {

// Minimal CSV support: comma separator, double-quote escaping with doubled
// quotes inside quoted fields. Fields never span lines; transcripts with
// newlines belong in the line-delimited corpus format instead.

std::string csv_escape(const std::string& field);
std::vector<std::string> parse_csv_line(const std::string& line);

// Stable numeric formatting for every emitted report ("%.12g"); byte-identical
// output depends on all doubles funneling through here.
std::string format_double(double v);

} // namespace zwise
