#include "cubelsh/rotations.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "cubelsh/rng.hpp"

namespace cubelsh {

namespace {

constexpr double kRankTolerance = 1e-12;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// In-place unnormalized fast Walsh-Hadamard butterfly.
void fwht(std::vector<double>& x) {
  const std::size_t n = x.size();
  for (std::size_t half = 1; half < n; half *= 2) {
    for (std::size_t block = 0; block < n; block += 2 * half) {
      for (std::size_t i = block; i < block + half; ++i) {
        const double a = x[i];
        const double b = x[i + half];
        x[i] = a + b;
        x[i + half] = a - b;
      }
    }
  }
}

std::vector<std::vector<double>> gaussian_rows(int rows, int cols,
                                               std::uint64_t seed) {
  std::vector<std::vector<double>> out(static_cast<std::size_t>(rows));
  for (int i = 0; i < rows; ++i) {
    RandomStream rng(seed, static_cast<std::uint64_t>(i));
    auto& row = out[static_cast<std::size_t>(i)];
    row.resize(static_cast<std::size_t>(cols));
    for (int j = 0; j < cols; ++j) row[static_cast<std::size_t>(j)] = rng.gaussian();
  }
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<std::vector<double>> gram_schmidt_rows(
    std::vector<std::vector<double>> rows) {
  const std::size_t count = rows.size();
  for (std::size_t i = 0; i < count; ++i) {
    auto& v = rows[i];
    // Two projection sweeps: the second pass removes the O(eps * kappa)
    // residue the first one leaves, keeping pairwise dots near 1e-16.
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < i; ++j) {
        const double c = dot(v, rows[j]);
        for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c * rows[j][k];
      }
    }
    const double norm = std::sqrt(dot(v, v));
    if (!(norm > kRankTolerance)) {
      throw std::runtime_error("rank-deficient rows in orthonormalization");
    }
    for (double& x : v) x /= norm;
  }
  return rows;
}

Rotation haar_rotation(int dim, std::uint64_t seed) {
  if (dim < 1) throw std::domain_error("rotation dimension must be positive");
  return Rotation(RotationKind::HaarQR, dim, dim, 0, seed,
                  gram_schmidt_rows(gaussian_rows(dim, dim, seed)));
}

Rotation partial_haar_rotation(int dim, int out_dim, std::uint64_t seed) {
  if (dim < 1) throw std::domain_error("rotation dimension must be positive");
  if (out_dim < 1 || out_dim > dim) {
    throw std::domain_error("partial rotation needs 1 <= out_dim <= dim");
  }
  return Rotation(RotationKind::GramSchmidtRows, dim, out_dim, 0, seed,
                  gram_schmidt_rows(gaussian_rows(out_dim, dim, seed)));
}

Rotation pseudo_rotation(int dim, int rounds, std::uint64_t seed) {
  if (!is_power_of_two(dim)) {
    throw std::domain_error("structured rotation needs a power-of-two dim");
  }
  if (rounds < 1) throw std::domain_error("structured rotation needs rounds >= 1");
  std::vector<std::vector<double>> diagonals(
      static_cast<std::size_t>(rounds));
  for (int r = 0; r < rounds; ++r) {
    RandomStream rng(seed, static_cast<std::uint64_t>(r));
    auto& diag = diagonals[static_cast<std::size_t>(r)];
    diag.resize(static_cast<std::size_t>(dim));
    for (int j = 0; j < dim; ++j) {
      diag[static_cast<std::size_t>(j)] = (rng.next_u64() & 1u) ? 1.0 : -1.0;
    }
  }
  return Rotation(RotationKind::PseudoStructured, dim, dim, rounds, seed,
                  std::move(diagonals));
}

std::vector<double> Rotation::apply(const std::vector<double>& x) const {
  if (static_cast<int>(x.size()) != in_dim_) {
    throw std::domain_error("rotation input has the wrong dimension");
  }
  if (kind_ == RotationKind::PseudoStructured) {
    std::vector<double> y = x;
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim_));
    for (const auto& diag : rows_) {
      for (std::size_t j = 0; j < y.size(); ++j) y[j] *= diag[j];
      fwht(y);
      for (double& v : y) v *= scale;
    }
    return y;
  }
  std::vector<double> y(static_cast<std::size_t>(out_dim_));
  for (int i = 0; i < out_dim_; ++i) {
    y[static_cast<std::size_t>(i)] = dot(rows_[static_cast<std::size_t>(i)], x);
  }
  return y;
}

std::vector<double> Rotation::apply_transpose(
    const std::vector<double>& y) const {
  if (static_cast<int>(y.size()) != out_dim_) {
    throw std::domain_error("rotation adjoint input has the wrong dimension");
  }
  if (kind_ == RotationKind::PseudoStructured) {
    std::vector<double> x = y;
    const double scale = 1.0 / std::sqrt(static_cast<double>(in_dim_));
    for (auto it = rows_.rbegin(); it != rows_.rend(); ++it) {
      fwht(x);
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = x[j] * scale * (*it)[j];
    }
    return x;
  }
  std::vector<double> x(static_cast<std::size_t>(in_dim_), 0.0);
  for (int i = 0; i < out_dim_; ++i) {
    const auto& row = rows_[static_cast<std::size_t>(i)];
    const double c = y[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < x.size(); ++k) x[k] += c * row[k];
  }
  return x;
}

HashCode hyperplane_hash(const std::vector<double>& x,
                         const std::vector<std::vector<double>>& normals) {
  if (normals.empty()) {
    throw std::domain_error("hyperplane hash needs at least one normal");
  }
  double norm2 = 0.0;
  for (const double v : x) norm2 += v * v;
  if (norm2 == 0.0) {
    throw std::domain_error("the zero vector has no hash");
  }
  HashCode code;
  code.resize(static_cast<int>(normals.size()));
  for (std::size_t j = 0; j < normals.size(); ++j) {
    if (normals[j].size() != x.size()) {
      throw std::domain_error("hyperplane normal has the wrong dimension");
    }
    if (dot(x, normals[j]) >= 0.0) code.set_bit(static_cast<int>(j));
  }
  return code;
}

HashCode hypercube_hash(const std::vector<double>& x, const Rotation& rotation,
                        int dprime) {
  if (dprime < 1 || dprime > rotation.out_dim()) {
    throw std::domain_error("orthant hash needs 1 <= dprime <= out_dim");
  }
  double norm2 = 0.0;
  for (const double v : x) norm2 += v * v;
  if (norm2 == 0.0) {
    throw std::domain_error("the zero vector has no hash");
  }
  const std::vector<double> y = rotation.apply(x);
  HashCode code;
  code.resize(dprime);
  for (int j = 0; j < dprime; ++j) {
    if (y[static_cast<std::size_t>(j)] >= 0.0) code.set_bit(j);
  }
  return code;
}

}  // namespace cubelsh
