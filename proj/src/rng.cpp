#include "implicert/rng.hpp"

namespace implicert {

std::uint64_t node_seed(std::uint64_t global_seed, const Restriction& alpha) {
  // FNV-1a over the canonical key, then mixed with the global seed.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : alpha.canonical_key()) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return mix64(global_seed + 0x9e3779b97f4a7c15ULL * mix64(h));
}

}  // namespace implicert
