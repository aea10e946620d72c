#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mms {

enum class ErrorCode {
  InvalidArgument,
  Parse,
  EmptyQuery,
  EmptyText,
  SpaceMismatch,
  ZeroVector,
  DuplicateDocument,
  MissingEmbedding,
  DegenerateBatch,
  SnapshotNotLoaded,
  CorruptSnapshot,
  VersionMismatch,
  Io,
  Config,
  State,
  Internal,
};

const char* error_code_name(ErrorCode code);

// Every failure in the core surfaces as an Error; the C API maps the
// code to an mms_status at the boundary.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

// Deterministic 64-bit mixing. All seeded randomness that must be stable
// across platforms (sparsifier projection, toy embedder) goes through
// these instead of library RNG distributions.
constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr uint64_t fnv1a64(std::string_view s, uint64_t h = 0xCBF29CE484222325ULL) {
  for (char c : s) {
    h ^= static_cast<uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

uint64_t fnv1a64_bytes(const void* data, size_t len, uint64_t h = 0xCBF29CE484222325ULL);

// CRC-32 (reflected, poly 0xEDB88320), used for snapshot section checksums.
uint32_t crc32(const void* data, size_t len, uint32_t seed = 0);

std::string to_hex(uint64_t v);

}  // namespace mms
