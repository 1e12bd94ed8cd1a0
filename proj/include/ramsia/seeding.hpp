#pragma once

#include <cstdint>
#include <initializer_list>

namespace ramsia {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic child seed for a tuple of counters, so that every
// (master, stream, m, trial, ...) cell draws from its own independent stream.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t state = mix64(master);
  for (std::uint64_t part : path) state = mix64(state ^ mix64(part + 0x632be59bd9b4e019ULL));
  return state;
}

}  // namespace ramsia
