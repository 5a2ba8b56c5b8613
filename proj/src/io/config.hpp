#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "core/freedata.hpp"
#include "hierarchy/solver.hpp"

namespace charids {

// Schema or value problem in a config: rejected before any solving starts.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Filesystem-level failure: missing or unreadable/corrupt artifacts.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A parsed run configuration. `canonical` is the full key=value listing in
// sorted order with every default made explicit, so configs that differ only
// in spelling out defaults hash identically.
struct RunConfig {
  FreeDataSpec spec;
  int n_gen = 65;
  int n_ang = 16;
  SolveOptions opt;
  std::string canonical;
  std::uint64_t hash = 0;
};

// Flat "dotted.key = value" lines; '#' starts a comment; blank lines
// ignored. Unknown and duplicate keys are rejected. List values are
// comma-separated and may be given as a single element, which broadcasts to
// the required length.
RunConfig parse_config_text(const std::string& text);

// Throws IoError when the file cannot be read, ConfigError on content.
RunConfig load_config_file(const std::string& path);

std::uint64_t fnv1a64(std::string_view s);

}  // namespace charids
