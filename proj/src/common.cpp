#include "mms/common.hpp"

#include <array>
#include <cstdio>

namespace mms {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::EmptyQuery: return "EmptyQuery";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::SpaceMismatch: return "SpaceMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::DuplicateDocument: return "DuplicateDocument";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::DegenerateBatch: return "DegenerateBatch";
    case ErrorCode::SnapshotNotLoaded: return "SnapshotNotLoaded";
    case ErrorCode::CorruptSnapshot: return "CorruptSnapshot";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
    case ErrorCode::State: return "State";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

uint64_t fnv1a64_bytes(const void* data, size_t len, uint64_t h) {
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

std::array<uint32_t, 256> make_crc_table() {
  std::array<uint32_t, 256> table{};
  for (uint32_t i = 0; i < 256; ++i) {
    uint32_t c = i;
    for (int k = 0; k < 8; ++k) {
      c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
    }
    table[i] = c;
  }
  return table;
}

}  // namespace

uint32_t crc32(const void* data, size_t len, uint32_t seed) {
  static const std::array<uint32_t, 256> table = make_crc_table();
  uint32_t c = seed ^ 0xFFFFFFFFu;
  const auto* p = static_cast<const uint8_t*>(data);
  for (size_t i = 0; i < len; ++i) {
    c = table[(c ^ p[i]) & 0xFF] ^ (c >> 8);
  }
  return c ^ 0xFFFFFFFFu;
}

std::string to_hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

}  // namespace mms
