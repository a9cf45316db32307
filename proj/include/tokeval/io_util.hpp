#pragma once

#include <string>
#include <string_view>

namespace tokeval {

// Whole-file read; DataError when the file cannot be opened.
std::string read_file(const std::string& path);

// Write via a sibling temp file + rename so readers never observe a partial
// file and failed runs leave the previous content in place.
void write_file_atomic(const std::string& path, std::string_view content);

}  // namespace tokeval
