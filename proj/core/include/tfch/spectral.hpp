#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tfch {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Periodic rectangle (0,Lx) x (0,Ly) sampled on Mx x My collocation points.
struct Grid2D {
  int Mx = 128;
  int My = 128;
  double Lx = kTwoPi;
  double Ly = kTwoPi;

  bool operator==(const Grid2D&) const = default;
  std::size_t size() const { return static_cast<std::size_t>(Mx) * My; }
  double x(int ix) const { return Lx * ix / Mx; }
  double y(int iy) const { return Ly * iy / My; }
  double cell_area() const { return (Lx / Mx) * (Ly / My); }
  double area() const { return Lx * Ly; }
};

/// Real grid function, row-major with index iy*Mx + ix.
class Field2D {
public:
  Field2D() = default;
  explicit Field2D(Grid2D g, double fill = 0.0) : grid(g), v(g.size(), fill) {}

  Grid2D grid;
  std::vector<double> v;

  double& operator()(int ix, int iy) { return v[static_cast<std::size_t>(iy) * grid.Mx + ix]; }
  double operator()(int ix, int iy) const { return v[static_cast<std::size_t>(iy) * grid.Mx + ix]; }

  Field2D& operator+=(const Field2D& o);
  Field2D& operator-=(const Field2D& o);
  Field2D& operator*=(double s);
  friend Field2D operator*(const Field2D& f, double s) {
    Field2D r = f;
    r *= s;
    return r;
  }
  friend Field2D operator+(Field2D a, const Field2D& b) { return a += b; }
  friend Field2D operator-(Field2D a, const Field2D& b) { return a -= b; }

  double max_abs() const;
};

/// Fourier pseudo-spectral workspace bound to one grid. Holds FFTW plans and
/// scratch buffers; not safe for concurrent calls on the same instance.
class Spectral {
public:
  explicit Spectral(Grid2D g);
  ~Spectral();
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;

  const Grid2D& grid() const { return grid_; }
  std::size_t spec_size() const { return k2_.size(); }
  /// Squared wavenumber magnitude per half-spectrum index.
  const std::vector<double>& k2() const { return k2_; }

  /// Normalized Fourier coefficients (division by Mx*My applied).
  void forward(const Field2D& f, std::complex<double>* out) const;
  void inverse(const std::complex<double>* in, Field2D& out) const;

  Field2D laplacian(const Field2D& f) const;

  /// Unique zero-mean g with -lap g = f. Throws if |mean f| > mean_tol.
  Field2D inv_laplacian_zero_mean(const Field2D& f, double mean_tol = 1e-10) const;

  double mean(const Field2D& f) const;
  /// Collocation approximation of the L2(Omega) inner product.
  double inner(const Field2D& a, const Field2D& b) const;
  double l2_norm(const Field2D& f) const;
  /// Spectral gradient norm ||grad f||.
  double h1_seminorm(const Field2D& f) const;
  /// ||f||_{-1} via the spectral sum over nonzero modes; throws on
  /// |mean f| > mean_tol.
  double hminus1_norm(const Field2D& f, double mean_tol = 1e-10) const;

  /// Parseval L2 norm squared of a normalized half-spectrum coefficient set.
  double spec_l2_norm2(std::span<const std::complex<double>> c) const;

  /// Scaled half-spectrum coefficients z_m with ||f||_{-1}^2 = sum |z_m|^2.
  /// Cached per time level to make history-energy sums cheap.
  std::vector<std::complex<double>> hm1_coeffs(const Field2D& f) const;
  static double hm1_dist2(std::span<const std::complex<double>> a,
                          std::span<const std::complex<double>> b);
  static double hm1_norm2(std::span<const std::complex<double>> a);

private:
  Grid2D grid_;
  std::vector<double> k2_;       // (2 pi m/L)^2 magnitudes, half spectrum
  std::vector<double> pweight_;  // Parseval weight 1 or 2 per half-spectrum bin
  void* plan_fwd_ = nullptr;
  void* plan_bwd_ = nullptr;
  mutable std::vector<double> rbuf_;
  mutable std::vector<std::complex<double>> cbuf_;
};

/// Ginzburg-Landau energy (eps^2/2)||grad phi||^2 + <F(phi),1> with
/// F(phi) = (phi^2-1)^2/4; potential term by collocation quadrature.
double energy_E(const Spectral& sp, const Field2D& phi, double eps);

/// Flat binary snapshot (row-major little-endian doubles) plus a JSON sidecar
/// {Mx, My, Lx, Ly, t, alpha} at path + ".json".
void write_snapshot(const std::string& path, const Field2D& f, double t,
                    double alpha);
Field2D read_snapshot(const std::string& path);

}  // namespace tfch
