#ifndef CTP_IO_HPP
#define CTP_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace ctp {

std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Quotes a CSV field when it contains a comma, quote, or line break.
std::string csv_field(std::string_view value);

/// Fixed-point decimal with `digits` places, independent of the global locale.
std::string format_fixed(double value, int digits);

}  // namespace ctp

#endif  // CTP_IO_HPP
