#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace prototopic {

// Shortest decimal representation that round-trips to the same double.
std::string format_double(double v);

// Full-precision parse of a complete token; nullopt on any trailing junk.
std::optional<double> parse_double(const std::string& s);

std::string read_file(const std::filesystem::path& path);

// Splits on '\n'; a trailing newline does not produce an empty last line.
std::vector<std::string> split_lines(const std::string& text);

void write_file(const std::filesystem::path& path, const std::string& content);

// FNV-1a 64 over the file bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

}  // namespace prototopic
