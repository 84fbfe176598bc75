#ifndef TORUSFLOW_SNAPSHOT_HPP
#define TORUSFLOW_SNAPSHOT_HPP

#include <filesystem>
#include <iosfwd>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

// Text format:
//   torusflow-spectral v1 n=<n>
//   k1 k2 re im        (one line per mode, lexicographic in (k1, k2), %.17g)

void write_snapshot(std::ostream& os, const SpectralField& f);
void write_snapshot(const std::filesystem::path& path, const SpectralField& f);

/// Throws FormatError on malformed input or a Hermitian defect above 1e-10.
SpectralField read_snapshot(std::istream& is);
SpectralField read_snapshot(const std::filesystem::path& path);

}  // namespace torusflow

#endif  // TORUSFLOW_SNAPSHOT_HPP
