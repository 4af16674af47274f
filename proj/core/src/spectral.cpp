#include "tfch/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace tfch {

Field2D& Field2D::operator+=(const Field2D& o) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += o.v[i];
  return *this;
}
Field2D& Field2D::operator-=(const Field2D& o) {
  for (std::size_t i = 0; i < v.size(); ++i) v[i] -= o.v[i];
  return *this;
}
Field2D& Field2D::operator*=(double s) {
  for (double& x : v) x *= s;
  return *this;
}
double Field2D::max_abs() const {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Spectral::Spectral(Grid2D g) : grid_(g) {
  if (g.Mx < 8 || g.My < 8 || g.Mx % 2 || g.My % 2)
    throw std::invalid_argument("Spectral: Mx, My must be even and >= 8");
  const int nxh = g.Mx / 2 + 1;
  k2_.resize(static_cast<std::size_t>(g.My) * nxh);
  pweight_.resize(k2_.size());
  for (int iy = 0; iy < g.My; ++iy) {
    const int my = iy <= g.My / 2 ? iy : iy - g.My;
    const double qy = kTwoPi * my / g.Ly;
    for (int ix = 0; ix < nxh; ++ix) {
      const double qx = kTwoPi * ix / g.Lx;
      const std::size_t m = static_cast<std::size_t>(iy) * nxh + ix;
      k2_[m] = qx * qx + qy * qy;
      pweight_[m] = (ix == 0 || ix == g.Mx / 2) ? 1.0 : 2.0;
    }
  }
  rbuf_.resize(g.size());
  cbuf_.resize(k2_.size());
  plan_fwd_ = fftw_plan_dft_r2c_2d(
      g.My, g.Mx, rbuf_.data(), reinterpret_cast<fftw_complex*>(cbuf_.data()),
      FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_c2r_2d(
      g.My, g.Mx, reinterpret_cast<fftw_complex*>(cbuf_.data()), rbuf_.data(),
      FFTW_ESTIMATE);
}

Spectral::~Spectral() {
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
}

void Spectral::forward(const Field2D& f, std::complex<double>* out) const {
  rbuf_ = f.v;
  fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_fwd_), rbuf_.data(),
                       reinterpret_cast<fftw_complex*>(out));
  const double scale = 1.0 / grid_.size();
  for (std::size_t m = 0; m < spec_size(); ++m) out[m] *= scale;
}

void Spectral::inverse(const std::complex<double>* in, Field2D& out) const {
  cbuf_.assign(in, in + spec_size());
  out.grid = grid_;
  out.v.resize(grid_.size());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_bwd_),
                       reinterpret_cast<fftw_complex*>(cbuf_.data()),
                       out.v.data());
}

Field2D Spectral::laplacian(const Field2D& f) const {
  std::vector<std::complex<double>> c(spec_size());
  forward(f, c.data());
  for (std::size_t m = 0; m < c.size(); ++m) c[m] *= -k2_[m];
  Field2D out;
  inverse(c.data(), out);
  return out;
}

Field2D Spectral::inv_laplacian_zero_mean(const Field2D& f, double mean_tol) const {
  std::vector<std::complex<double>> c(spec_size());
  forward(f, c.data());
  if (std::abs(c[0].real()) > mean_tol)
    throw std::invalid_argument("inv_laplacian_zero_mean: field has nonzero mean");
  c[0] = 0.0;
  for (std::size_t m = 1; m < c.size(); ++m)
    if (k2_[m] > 0) c[m] /= k2_[m];
  Field2D out;
  inverse(c.data(), out);
  return out;
}

double Spectral::mean(const Field2D& f) const {
  double s = 0.0;
  for (double x : f.v) s += x;
  return s / grid_.size();
}

double Spectral::inner(const Field2D& a, const Field2D& b) const {
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i];
  return s * grid_.cell_area();
}

double Spectral::l2_norm(const Field2D& f) const {
  return std::sqrt(inner(f, f));
}

double Spectral::h1_seminorm(const Field2D& f) const {
  std::vector<std::complex<double>> c(spec_size());
  forward(f, c.data());
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m)
    s += pweight_[m] * k2_[m] * std::norm(c[m]);
  return std::sqrt(s * grid_.area());
}

double Spectral::hminus1_norm(const Field2D& f, double mean_tol) const {
  std::vector<std::complex<double>> c(spec_size());
  forward(f, c.data());
  if (std::abs(c[0].real()) > mean_tol)
    throw std::invalid_argument("hminus1_norm: field has nonzero mean");
  double s = 0.0;
  for (std::size_t m = 1; m < c.size(); ++m)
    if (k2_[m] > 0) s += pweight_[m] * std::norm(c[m]) / k2_[m];
  return std::sqrt(s * grid_.area());
}

double Spectral::spec_l2_norm2(std::span<const std::complex<double>> c) const {
  double s = 0.0;
  for (std::size_t m = 0; m < c.size(); ++m)
    s += pweight_[m] * std::norm(c[m]);
  return s * grid_.area();
}

std::vector<std::complex<double>> Spectral::hm1_coeffs(const Field2D& f) const {
  std::vector<std::complex<double>> c(spec_size());
  forward(f, c.data());
  c[0] = 0.0;
  for (std::size_t m = 1; m < c.size(); ++m)
    c[m] *= std::sqrt(pweight_[m] * grid_.area() / k2_[m]);
  return c;
}

double Spectral::hm1_dist2(std::span<const std::complex<double>> a,
                           std::span<const std::complex<double>> b) {
  double s = 0.0;
  for (std::size_t m = 0; m < a.size(); ++m) s += std::norm(a[m] - b[m]);
  return s;
}

double Spectral::hm1_norm2(std::span<const std::complex<double>> a) {
  double s = 0.0;
  for (const auto& z : a) s += std::norm(z);
  return s;
}

double energy_E(const Spectral& sp, const Field2D& phi, double eps) {
  double pot = 0.0;
  for (double x : phi.v) {
    const double q = x * x - 1.0;
    pot += 0.25 * q * q;
  }
  pot *= sp.grid().cell_area();
  const double grad = sp.h1_seminorm(phi);
  return 0.5 * eps * eps * grad * grad + pot;
}

void write_snapshot(const std::string& path, const Field2D& f, double t,
                    double alpha) {
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw std::runtime_error("write_snapshot: cannot open " + path);
  bin.write(reinterpret_cast<const char*>(f.v.data()),
            static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  nlohmann::json side{{"Mx", f.grid.Mx}, {"My", f.grid.My},
                      {"Lx", f.grid.Lx}, {"Ly", f.grid.Ly},
                      {"t", t},          {"alpha", alpha}};
  std::ofstream js(path + ".json");
  js << side.dump(2) << '\n';
}

Field2D read_snapshot(const std::string& path) {
  std::ifstream js(path + ".json");
  if (!js) throw std::runtime_error("read_snapshot: missing sidecar for " + path);
  nlohmann::json side = nlohmann::json::parse(js);
  Grid2D g{side["Mx"], side["My"], side["Lx"], side["Ly"]};
  Field2D f(g);
  std::ifstream bin(path, std::ios::binary);
  bin.read(reinterpret_cast<char*>(f.v.data()),
           static_cast<std::streamsize>(f.v.size() * sizeof(double)));
  if (!bin) throw std::runtime_error("read_snapshot: truncated " + path);
  return f;
}

}  // namespace tfch
