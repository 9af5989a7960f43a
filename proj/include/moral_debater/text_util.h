#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace moral_debater {

// ASCII lowercase; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);
std::vector<std::string_view> split(std::string_view s, char sep);
std::string join(const std::vector<std::string>& parts, std::string_view sep);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// Small English function-word list used for content-term selection.
bool is_stopword(std::string_view token);

// Splits on '\n', dropping a trailing '\r' on each line.
std::vector<std::string_view> lines_of(std::string_view text);

}  // namespace moral_debater
