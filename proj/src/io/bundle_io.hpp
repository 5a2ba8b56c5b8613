#pragma once
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hierarchy/solver.hpp"
#include "io/config.hpp"
#include "residual/residual.hpp"

namespace charids {

// On-disk layout under an output directory:
//   <dir>/I0/<field>.csv, <dir>/I1/<field>.csv, <dir>/manifest.txt
// Field files carry one row per node and component at 17 significant digits.
// The manifest records the canonical config, per-file content hashes, stage
// timings, residual norms, and an integrity hash covering everything except
// wall-clock times, so identical runs produce identical hashes.

// Writes the nine field files of one bundle; appends (relative path, content
// hash) pairs to `files`. Throws IoError on filesystem failure.
void write_bundle(const std::string& dir, const SolvedBundle& b,
                  std::vector<std::pair<std::string, std::uint64_t>>& files);

// Reads one surface's field files back. The grid comes from the config.
// Throws IoError on missing or malformed files.
SolvedBundle read_bundle(const std::string& dir, Surface surf, const RunConfig& cfg);

struct ManifestData {
  std::string config_text;  // canonical config block
  std::vector<std::pair<std::string, std::string>> stages;
  std::vector<std::pair<std::string, std::uint64_t>> files;
  std::vector<std::pair<std::string, std::string>> residuals;
  std::uint64_t hash = 0;  // as recorded in the file
};

void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<const SolvedBundle*>& bundles,
                    const std::vector<ResidualReport>& reports,
                    const std::vector<std::pair<std::string, std::uint64_t>>& files);

ManifestData read_manifest(const std::string& dir);

// Integrity hash over config text, file hash lines, and residual lines.
std::uint64_t manifest_hash(const ManifestData& m);

// Content hash of a file on disk. Throws IoError when unreadable.
std::uint64_t hash_file(const std::string& path);

// Whole-file text write, IoError on failure.
void write_text_file(const std::string& path, const std::string& text);

// Residual norm lines for one report, "<surface>.<key>.<stat> = <value>".
std::vector<std::pair<std::string, std::string>> residual_lines(const ResidualReport& rep);

}  // namespace charids
