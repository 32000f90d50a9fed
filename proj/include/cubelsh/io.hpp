#pragma once

#include <string>
#include <vector>

namespace cubelsh {

/// A dataset loaded from disk: row vectors L2-normalized to unit length.
/// Zero vectors cannot be normalized; they are skipped and counted so the
/// caller can warn about them. `dimension` is the common width of the
/// surviving vectors (0 when none survived).
struct LoadedDataset {
  std::vector<std::vector<double>> vectors;
  int dimension = 0;
  int skipped_zero = 0;
};

/// Reads an .fvecs file: each vector is a 32-bit little-endian integer
/// count followed by that many 32-bit little-endian IEEE-754 floats.
/// Every record must carry the same count. Vectors are L2-normalized on
/// load; zero vectors are skipped and counted. Throws std::runtime_error
/// on unreadable, truncated, non-finite, or mixed-dimension input.
LoadedDataset read_fvecs(const std::string& path);

/// Reads a CSV of one vector per row: comma-separated decimal numbers
/// with '.' as the decimal separator; blank lines are ignored. Same
/// normalization and error contract as read_fvecs, plus rejection of
/// ragged rows and non-numeric fields.
LoadedDataset read_csv_vectors(const std::string& path);

/// Loads a dataset by file extension: ".fvecs" is read as the binary
/// format, anything else as CSV.
LoadedDataset load_dataset(const std::string& path);

/// Formats a real number with 12 significant digits, '.' decimal
/// separator, locale-independent; the single number format all emitted
/// tables use. Zero is always "0" (never "-0").
std::string format_real(double x);

/// Joins fields with commas and a trailing newline. Fields are emitted
/// verbatim: callers only pass numbers and bare identifiers, which need
/// no quoting.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace cubelsh
