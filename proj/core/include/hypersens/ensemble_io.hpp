#pragma once

// Binary ensemble file, all fields little-endian:
//
//   char[4]  magic "HSEN"
//   u32      format version (kEnsembleFormatVersion)
//   u32      D, N, n
//   f64      J, k, g
//   u32      initial-state kind (0 coherent, 1 explicit amplitudes)
//            kind 0: f64 theta, f64 phi_az
//            kind 1: D x (f64 re, f64 im)
//   N x D x (f64 re, f64 im)   vectors in history order
//   N x f64                    probabilities

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>

#include "hypersens/kicked_top.hpp"

namespace hypersens {

inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

void write_ensemble(std::ostream& out, const VectorEnsemble& ensemble);
/// Throws FormatError on a bad magic, an unsupported version or truncated data.
VectorEnsemble read_ensemble(std::istream& in);

/// Writes to a temporary sibling first and renames, so a failed write leaves no file.
void save_ensemble(const std::filesystem::path& path, const VectorEnsemble& ensemble);
VectorEnsemble load_ensemble(const std::filesystem::path& path);

}  // namespace hypersens
