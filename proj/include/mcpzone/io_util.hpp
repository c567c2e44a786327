#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mcpzone::io {

/// Shortest round-trip decimal representation of a double (std::to_chars).
std::string format_double(double value);

/// Trim ASCII whitespace from both ends.
std::string_view trim(std::string_view s);

/// RFC 4180 style field quoting: quotes only when the field needs it.
std::string csv_escape(std::string_view field);

/// Split one CSV record, honoring double-quoted fields with "" escapes.
std::vector<std::string> csv_split(std::string_view line);

/// Join values with `sep`, no escaping.
std::string join(const std::vector<std::string>& values, std::string_view sep);

/// FNV-1a 64-bit over bytes; basis for stable machine-independent ids.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 14695981039346656037ULL);

/// Lower-case 16-digit hex rendering of a 64-bit value.
std::string hex16(std::uint64_t value);

/// Read a whole file; throws std::runtime_error naming the path on failure.
std::string read_file(const std::string& path);

/// Write a whole file; throws std::runtime_error naming the path on failure.
void write_file(const std::string& path, std::string_view content);

}  // namespace mcpzone::io
