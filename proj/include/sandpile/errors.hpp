#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sandpile {

// Malformed input text (graph, configuration, or table files).
struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration would exceed a configured cap. The message names the exact
// state-space size that was refused.
struct SizeError : std::runtime_error {
  SizeError(const std::string& what, std::uint64_t count)
      : std::runtime_error(what), count(count) {}
  std::uint64_t count;
};

}  // namespace sandpile
