#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace argocast {

// FNV-1a 64-bit, used for input-file content hashes and seed mixing.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 14695981039346656037ULL);
std::uint64_t hash_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t v);

void log_warn(const std::string& msg);

}  // namespace argocast
