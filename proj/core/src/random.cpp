#include "swarmwatch/random.hpp"

#include "swarmwatch/error.hpp"

namespace swarmwatch {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kInvalidBox: return "InvalidBox";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kInvalidMatrix: return "InvalidMatrix";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kCountMismatch: return "CountMismatch";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kTooMany: return "TooMany";
    case ErrorCode::kMalformed: return "Malformed";
    case ErrorCode::kNonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptyBuffer: return "EmptyBuffer";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kScoutTimeout: return "ScoutTimeout";
    case ErrorCode::kRegistrationFailed: return "RegistrationFailed";
    case ErrorCode::kAssignmentFailed: return "AssignmentFailed";
  }
  return "Unknown";
}

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Rng make_stream(std::uint64_t seed, std::string_view stream, std::uint64_t index) {
  std::uint64_t s = splitmix64(seed ^ fnv1a64(stream));
  s = splitmix64(s + index);
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
  return Rng(seq);
}

}  // namespace swarmwatch
