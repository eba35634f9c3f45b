#pragma once

#include <cstdint>
#include <string>

namespace ringlab::io {

// Shortest round-trip decimal representation (%.17g trimmed); used for every
// CSV number so outputs are byte-identical across runs and thread counts.
std::string format_double(double x);

std::string format_u64(std::uint64_t x);

void ensure_directory(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);

std::string read_text_file(const std::string& path);

}  // namespace ringlab::io
