#pragma once

#include <string>
#include <vector>

namespace airdecode {

// One document per line; trailing blank lines are dropped.
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace airdecode
