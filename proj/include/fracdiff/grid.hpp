#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracdiff {

/// Rectangular concentration field at one timestep, boundary ring included.
/// Row-major with the x index slow: value(j, l) = v[j * ny + l].
struct Field2D {
  int nx = 0;
  int ny = 0;
  double dx = 1.0;
  double dy = 1.0;
  std::vector<double> v;

  Field2D() = default;
  Field2D(int nx_, int ny_, double dx_, double dy_)
      : nx(nx_), ny(ny_), dx(dx_), dy(dy_) {
    if (nx < 3 || ny < 3)
      throw std::invalid_argument("Field2D: nx and ny must be >= 3");
    if (!(dx > 0.0) || !(dy > 0.0))
      throw std::invalid_argument("Field2D: dx and dy must be positive");
    v.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  }

  double& at(int j, int l) { return v[static_cast<std::size_t>(j) * ny + l]; }
  double at(int j, int l) const {
    return v[static_cast<std::size_t>(j) * ny + l];
  }

  /// Centered coordinates: the origin sits at the grid midpoint.
  double x_of(int j) const { return (j - 0.5 * (nx - 1)) * dx; }
  double y_of(int l) const { return (l - 0.5 * (ny - 1)) * dy; }

  bool all_finite() const {
    for (double u : v)
      if (!std::isfinite(u)) return false;
    return true;
  }

  double max_abs() const {
    double m = 0.0;
    for (double u : v) {
      const double a = std::fabs(u);
      if (a > m) m = a;
    }
    return m;
  }

  double max_abs_interior() const {
    double m = 0.0;
    for (int j = 1; j < nx - 1; ++j)
      for (int l = 1; l < ny - 1; ++l) {
        const double a = std::fabs(at(j, l));
        if (a > m) m = a;
      }
    return m;
  }
};

/// Combined weighted second-difference field
/// (alpha/dx^2) dxx + (beta/dy^2) dyy at one timestep.
/// Defined on interior points only; the boundary ring is zero by convention.
struct LapField {
  int nx = 0;
  int ny = 0;
  std::vector<double> v;

  LapField() = default;
  LapField(int nx_, int ny_) : nx(nx_), ny(ny_) {
    v.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  }

  double& at(int j, int l) { return v[static_cast<std::size_t>(j) * ny + l]; }
  double at(int j, int l) const {
    return v[static_cast<std::size_t>(j) * ny + l];
  }
};

enum class BcKind { Dirichlet };

/// Boundary treatment of the ring; Dirichlet with a constant value is the
/// only shipped kind (value 0 matches the decaying-to-zero edges of the
/// reference experiments).
struct BoundarySpec {
  BcKind kind = BcKind::Dirichlet;
  double value = 0.0;
};

/// Overwrites the boundary ring; interior values are untouched.
inline void apply_bc(Field2D& f, const BoundarySpec& bc) {
  switch (bc.kind) {
    case BcKind::Dirichlet:
      for (int j = 0; j < f.nx; ++j) {
        f.at(j, 0) = bc.value;
        f.at(j, f.ny - 1) = bc.value;
      }
      for (int l = 0; l < f.ny; ++l) {
        f.at(0, l) = bc.value;
        f.at(f.nx - 1, l) = bc.value;
      }
      return;
  }
  throw std::invalid_argument("apply_bc: unknown boundary kind");
}

/// Gaussian pulse centered on the grid midpoint:
/// u(x, y) = exp(-x^2 / 2 sigma1^2) exp(-y^2 / 2 sigma2^2).
inline Field2D gaussian_ic(int nx, int ny, double dx, double dy, double sigma1,
                           double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0))
    throw std::invalid_argument("gaussian_ic: sigma must be positive");
  Field2D f(nx, ny, dx, dy);
  for (int j = 0; j < nx; ++j) {
    const double x = f.x_of(j);
    const double gx = std::exp(-x * x / (2.0 * sigma1 * sigma1));
    for (int l = 0; l < ny; ++l) {
      const double y = f.y_of(l);
      f.at(j, l) = gx * std::exp(-y * y / (2.0 * sigma2 * sigma2));
    }
  }
  return f;
}

inline Field2D uniform_ic(int nx, int ny, double dx, double dy,
                          double value = 1.0) {
  Field2D f(nx, ny, dx, dy);
  f.v.assign(f.v.size(), value);
  return f;
}

/// Unit impulse at the grid point nearest the midpoint.
inline Field2D spike_ic(int nx, int ny, double dx, double dy,
                        double amplitude = 1.0) {
  Field2D f(nx, ny, dx, dy);
  f.at((nx - 1) / 2, (ny - 1) / 2) = amplitude;
  return f;
}

/// Combined weighted centered second differences. The symmetric grouping
/// (left + right - 2 center) keeps mirrored points bitwise equal for
/// mirror-symmetric input.
inline void laplacian_into(const Field2D& f, double alpha, double beta,
                           LapField& out) {
  if (out.nx != f.nx || out.ny != f.ny) out = LapField(f.nx, f.ny);
  const double cx = alpha / (f.dx * f.dx);
  const double cy = beta / (f.dy * f.dy);
  for (int j = 1; j < f.nx - 1; ++j)
    for (int l = 1; l < f.ny - 1; ++l) {
      const double sx = (f.at(j + 1, l) + f.at(j - 1, l)) - 2.0 * f.at(j, l);
      const double sy = (f.at(j, l + 1) + f.at(j, l - 1)) - 2.0 * f.at(j, l);
      out.at(j, l) = cx * sx + cy * sy;
    }
}

inline LapField laplacian(const Field2D& f, double alpha, double beta) {
  LapField out(f.nx, f.ny);
  laplacian_into(f, alpha, beta, out);
  return out;
}

/// Snapshot export: one CSV row per grid y-line, scientific notation with
/// 10 significant digits.
inline void write_snapshot_csv(const Field2D& f, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_snapshot_csv: cannot open " + path);
  char buf[32];
  for (int l = 0; l < f.ny; ++l) {
    for (int j = 0; j < f.nx; ++j) {
      std::snprintf(buf, sizeof(buf), "%.9e", f.at(j, l));
      out << buf << (j + 1 < f.nx ? "," : "");
    }
    out << "\n";
  }
}

}  // namespace fracdiff
