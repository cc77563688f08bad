#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace reviewforge {

// Reads a text file into lines, tolerating a missing trailing newline and
// stripping CR. Throws std::runtime_error if the file cannot be opened.
std::vector<std::string> read_lines(const std::filesystem::path& path);

// Writes lines LF-terminated, creating parent directories as needed.
void write_lines(const std::filesystem::path& path, std::span<const std::string> lines);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace reviewforge
