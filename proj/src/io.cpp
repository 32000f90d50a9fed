#include "cubelsh/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cubelsh {

namespace {

/// Normalizes `raw` in place and appends it, or counts it as skipped when
/// its norm is zero. Rejects non-finite entries.
void normalize_into(LoadedDataset& out, std::vector<double>& raw,
                    const std::string& path) {
  double norm2 = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(path + ": non-finite vector entry");
    }
    norm2 += v * v;
  }
  if (norm2 == 0.0) {
    ++out.skipped_zero;
    return;
  }
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& v : raw) v *= inv;
  out.vectors.push_back(std::move(raw));
}

std::uint32_t read_u32_le(const unsigned char* b) {
  return static_cast<std::uint32_t>(b[0]) |
         (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) |
         (static_cast<std::uint32_t>(b[3]) << 24);
}

}  // namespace

LoadedDataset read_fvecs(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  LoadedDataset out;
  unsigned char header[4];
  while (in.read(reinterpret_cast<char*>(header), 4)) {
    const std::uint32_t count = read_u32_le(header);
    if (count == 0 || count > (1u << 24)) {
      throw std::runtime_error(path + ": implausible vector length " +
                               std::to_string(count));
    }
    const int dim = static_cast<int>(count);
    if (out.dimension == 0) {
      out.dimension = dim;
    } else if (dim != out.dimension) {
      throw std::runtime_error(path + ": mixed vector lengths " +
                               std::to_string(out.dimension) + " and " +
                               std::to_string(dim));
    }
    std::vector<unsigned char> payload(4 * static_cast<std::size_t>(dim));
    if (!in.read(reinterpret_cast<char*>(payload.data()),
                 static_cast<std::streamsize>(payload.size()))) {
      throw std::runtime_error(path + ": truncated vector record");
    }
    std::vector<double> raw(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      raw[static_cast<std::size_t>(j)] = static_cast<double>(
          std::bit_cast<float>(read_u32_le(&payload[4 * static_cast<std::size_t>(j)])));
    }
    normalize_into(out, raw, path);
  }
  if (in.gcount() != 0) {
    throw std::runtime_error(path + ": truncated vector header");
  }
  if (out.dimension == 0) {
    throw std::runtime_error(path + ": no vectors");
  }
  return out;
}

LoadedDataset read_csv_vectors(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error(path + ": cannot open");
  }
  LoadedDataset out;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    bool blank = true;
    for (char c : line) {
      if (c != ' ' && c != '\t') {
        blank = false;
        break;
      }
    }
    if (blank) continue;
    std::vector<double> raw;
    std::stringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      while (used < field.size() &&
             (field[used] == ' ' || field[used] == '\t')) {
        ++used;
      }
      if (used != field.size() || field.empty()) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": bad number '" + field + "'");
      }
      raw.push_back(v);
    }
    const int dim = static_cast<int>(raw.size());
    if (out.dimension == 0) {
      out.dimension = dim;
    } else if (dim != out.dimension) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(out.dimension) +
                               " fields, got " + std::to_string(dim));
    }
    normalize_into(out, raw, path);
  }
  if (out.dimension == 0) {
    throw std::runtime_error(path + ": no vectors");
  }
  return out;
}

LoadedDataset load_dataset(const std::string& path) {
  const std::string suffix = ".fvecs";
  if (path.size() >= suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return read_fvecs(path);
  }
  return read_csv_vectors(path);
}

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) row += ',';
    row += fields[i];
  }
  row += '\n';
  return row;
}

}  // namespace cubelsh
