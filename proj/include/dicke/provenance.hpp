#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dicke/model.hpp"

namespace dicke {

// Bumped whenever the binary artifact layout changes; stored in every file
// header and mixed into params_hash so stale artifacts can never be reused.
inline constexpr int kFormatVersion = 1;

// SHA-256 of a byte string, lowercase hex.
std::string sha256_hex(const void* data, std::size_t size);
std::string sha256_hex(const std::string& data);

// Canonical textual form of a parameter set: every real printed with %.17g
// (round-trip exact for IEEE doubles), plus sector and format version.
std::string canonical_param_string(const ModelParams& params, Sector sector);

// Cache key for all persisted artifacts derived from (params, sector).
std::string params_hash(const ModelParams& params, Sector sector);

}  // namespace dicke
