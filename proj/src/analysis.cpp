#include "blochgen/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace blochgen {

void Curve::check() const {
  if (x.size() != y.size()) throw std::invalid_argument("curve: x and y differ in length");
  if (x.size() < 3) throw std::invalid_argument("curve: need at least 3 points");
  for (std::size_t k = 1; k < x.size(); ++k)
    if (!(x[k] > x[k - 1])) throw std::invalid_argument("curve: x must be strictly increasing");
}

namespace {

double crossing(double xa, double ya, double xb, double yb, double level) {
  return xa + (level - ya) * (xb - xa) / (yb - ya);
}

}  // namespace

double fwhm_interpolated(const Curve& curve) {
  curve.check();
  const auto& x = curve.x;
  const auto& y = curve.y;
  const std::size_t n = y.size();
  const auto imax = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double base = *std::min_element(y.begin(), y.end());
  const double half = base + 0.5 * (y[imax] - base);

  // A second local maximum above the half level means this is not a single line.
  int above_half_maxima = 0;
  for (std::size_t k = 1; k + 1 < n; ++k)
    if (y[k] > y[k - 1] && y[k] >= y[k + 1] && y[k] > half) ++above_half_maxima;
  if (above_half_maxima > 1) throw std::domain_error("fwhm: curve has multiple maxima");

  std::size_t l = imax;
  while (l > 0 && y[l] >= half) --l;
  if (y[l] >= half) throw std::domain_error("fwhm: no half-maximum crossing on the left");
  std::size_t r = imax;
  while (r + 1 < n && y[r] >= half) ++r;
  if (y[r] >= half) throw std::domain_error("fwhm: no half-maximum crossing on the right");
  const double xl = crossing(x[l], y[l], x[l + 1], y[l + 1], half);
  const double xr = crossing(x[r - 1], y[r - 1], x[r], y[r], half);
  return xr - xl;
}

namespace {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<Vec4, 4>;

// Solves A z = b by Gaussian elimination with partial pivoting.
bool solve4(Mat4 a, Vec4 b, Vec4& z) {
  for (int c = 0; c < 4; ++c) {
    int piv = c;
    for (int r = c + 1; r < 4; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (a[piv][c] == 0.0) return false;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (int r = c + 1; r < 4; ++r) {
      const double f = a[r][c] / a[c][c];
      for (int k = c; k < 4; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  for (int r = 3; r >= 0; --r) {
    double s = b[r];
    for (int k = r + 1; k < 4; ++k) s -= a[r][k] * z[k];
    z[r] = s / a[r][r];
  }
  return true;
}

// p = (center, fwhm, amplitude, offset)
double model(const Vec4& p, double x) {
  const double q = 0.5 * p[1];
  const double u = x - p[0];
  return p[3] + p[2] * q * q / (u * u + q * q);
}

double sse(const Curve& c, const Vec4& p) {
  double s = 0.0;
  for (std::size_t k = 0; k < c.x.size(); ++k) {
    const double r = c.y[k] - model(p, c.x[k]);
    s += r * r;
  }
  return s;
}

}  // namespace

LorentzianFit lorentzian_fit(const Curve& curve) {
  const double w0 = fwhm_interpolated(curve);
  const auto imax = static_cast<std::size_t>(std::max_element(curve.y.begin(), curve.y.end()) - curve.y.begin());
  const double base = *std::min_element(curve.y.begin(), curve.y.end());
  Vec4 p{curve.x[imax], w0, curve.y[imax] - base, base};

  constexpr int kMaxIterations = 200;
  constexpr double kRelTol = 1e-10;
  double lambda = 1e-3;
  double cost = sse(curve, p);
  LorentzianFit fit;
  for (int it = 1; it <= kMaxIterations; ++it) {
    fit.iterations = it;
    Mat4 jtj{};
    Vec4 jtr{};
    for (std::size_t k = 0; k < curve.x.size(); ++k) {
      const double q = 0.5 * p[1];
      const double u = curve.x[k] - p[0];
      const double d = u * u + q * q;
      const double g = q * q / d;
      const Vec4 j{p[2] * q * q * 2.0 * u / (d * d), p[2] * q * u * u / (d * d), g, 1.0};
      const double r = curve.y[k] - model(p, curve.x[k]);
      for (int a = 0; a < 4; ++a) {
        jtr[a] += j[a] * r;
        for (int b = 0; b < 4; ++b) jtj[a][b] += j[a] * j[b];
      }
    }
    if (cost == 0.0) {
      fit.converged = true;
      break;
    }
    bool accepted = false;
    Vec4 delta{};
    while (lambda < 1e16) {
      Mat4 a = jtj;
      for (int k = 0; k < 4; ++k) a[k][k] += lambda * std::max(jtj[k][k], std::numeric_limits<double>::min());
      if (!solve4(a, jtr, delta)) {
        lambda *= 10.0;
        continue;
      }
      Vec4 trial = p;
      for (int k = 0; k < 4; ++k) trial[k] += delta[k];
      const double c = trial[1] > 0.0 ? sse(curve, trial) : std::numeric_limits<double>::infinity();
      if (c <= cost) {
        p = trial;
        cost = c;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction left at working precision.
      fit.converged = true;
      break;
    }
    const Vec4 scale{std::max(std::abs(p[0]), std::abs(p[1])), std::abs(p[1]), std::abs(p[2]),
                     std::max(std::abs(p[3]), std::abs(p[2]))};
    bool small = true;
    for (int k = 0; k < 4; ++k)
      if (std::abs(delta[k]) > kRelTol * scale[k]) small = false;
    if (small) {
      fit.converged = true;
      break;
    }
  }
  fit.center = p[0];
  fit.fwhm = p[1];
  fit.amplitude = p[2];
  fit.offset = p[3];
  fit.residual_rms = std::sqrt(cost / static_cast<double>(curve.x.size()));
  return fit;
}

std::vector<Peak> peak_find(const Curve& curve) {
  curve.check();
  const auto& x = curve.x;
  const auto& y = curve.y;
  std::vector<Peak> out;
  for (std::size_t k = 1; k + 1 < y.size(); ++k) {
    if (!(y[k] > y[k - 1] && y[k] > y[k + 1])) continue;
    // Vertex of the parabola through the three samples.
    const double x0 = x[k - 1], x1 = x[k], x2 = x[k + 1];
    const double y0 = y[k - 1], y1 = y[k], y2 = y[k + 1];
    const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
    const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
    const double xv = x1 - 0.5 * num / den;
    const double l0 = (xv - x1) * (xv - x2) / ((x0 - x1) * (x0 - x2));
    const double l1 = (xv - x0) * (xv - x2) / ((x1 - x0) * (x1 - x2));
    const double l2 = (xv - x0) * (xv - x1) / ((x2 - x0) * (x2 - x1));
    out.push_back({xv, y0 * l0 + y1 * l1 + y2 * l2});
  }
  return out;
}

double two_level_steady_state(double omega, double gamma_pop, double gamma_coh, double delta) {
  if (!(gamma_pop > 0.0) || !(gamma_coh > 0.0)) throw std::invalid_argument("two_level_steady_state: rates must be positive");
  const double sat = 4.0 * omega * omega * gamma_coh / gamma_pop;
  return 0.5 * sat / (delta * delta + gamma_coh * gamma_coh + sat);
}

double power_broadened_fwhm(double omega, double gamma_pop, double gamma_coh) {
  return 2.0 * std::sqrt(gamma_coh * gamma_coh + 4.0 * omega * omega * gamma_coh / gamma_pop);
}

double cpt_coherence(double omega12, double omega23) {
  const double norm = omega12 * omega12 + omega23 * omega23;
  if (norm == 0.0) throw std::invalid_argument("cpt_coherence: both Rabi frequencies are zero");
  return -omega12 * omega23 / norm;
}

}  // namespace blochgen
