#include "mlab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlab {

void KernelParams::validate() const {
  if (!(t > 0) || !std::isfinite(t)) throw std::invalid_argument("poisson: t must be positive");
  if (!(std::abs(theta) < kPi / 2)) throw std::invalid_argument("poisson: |theta| must be below pi/2");
  if (d < 1) throw std::invalid_argument("poisson: dimension must be at least 1");
}

double sphere_area(int d) { return 2.0 * std::pow(kPi, d / 2.0) / std::tgamma(d / 2.0); }

double poisson_normalization(int d) { return std::tgamma((d + 1) / 2.0) / std::pow(kPi, (d + 1) / 2.0); }

cplx poisson_kernel_radial(double r2, const KernelParams& p) {
  const cplx z = std::polar(p.t, p.theta);
  const cplx v = z / std::pow(z * z + r2, (p.d + 1) / 2.0);
  return p.normalized ? v * poisson_normalization(p.d) : v;
}

cplx poisson_kernel(std::span<const double> x, const KernelParams& p) {
  p.validate();
  if (x.size() != static_cast<std::size_t>(p.d)) throw std::invalid_argument("poisson_kernel: point dimension mismatch");
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return poisson_kernel_radial(r2, p);
}

double theta_gap(double theta) { return kPi / 2 - std::abs(theta); }

double p_modulus(double r, double theta) { return std::abs(std::polar(1.0, 2 * theta) + r * r); }

namespace {

void check_theta(double theta) {
  if (!(std::abs(theta) < kPi / 2)) throw std::invalid_argument("poisson: |theta| must be below pi/2");
}

// Radii where |P(r)| changes regime: r^2 = 1 -+ gap, the minimum of |P| and r = 1.
std::vector<double> regime_radii(double theta) {
  const double g = theta_gap(theta);
  std::vector<double> out{1.0, std::sqrt(1.0 + g)};
  if (g < 1.0) out.push_back(std::sqrt(1.0 - g));
  const double c = -std::cos(2 * theta);
  if (c > 0) out.push_back(std::sqrt(c));
  return out;
}

// (1 + u)^{-a} - 1 without cancellation for small |u|.
cplx power_increment(cplx u, double a) {
  if (std::abs(u) >= 1e-2) return std::pow(1.0 + u, -a) - 1.0;
  cplx term = 1.0, sum = 0.0;
  for (int n = 1; n <= 12; ++n) {
    term *= (-a - (n - 1)) / n * u;
    sum += term;
  }
  return sum;
}

struct Radial {
  double inner = 0.0, outer = 0.0;
  bool converged = true;
};

// sphere_area(d) * integral of f(r) r^{d-1} over [0, 2] and [2, inf).
Radial radial(const RealFn& f, int d, double theta, double rel_tol) {
  const double w = sphere_area(d);
  const RealFn g = [&](double r) { return f(r) * std::pow(r, d - 1); };
  const QuadResult a = integrate(g, 0.0, 2.0, rel_tol, regime_radii(theta));
  const QuadResult b = integrate_to_infinity(g, 2.0, rel_tol);
  return {w * a.value, w * b.value, a.converged && b.converged};
}

}  // namespace

QuadResult c4_integral(double theta, int d, double delta, double rel_tol) {
  check_theta(theta);
  if (d < 1) throw std::invalid_argument("c4_integral: dimension must be at least 1");
  if (!(delta >= 0 && delta < 1)) throw std::invalid_argument("c4_integral: delta must lie in [0, 1)");
  const double a = (d + 1) / 2.0;
  const Radial r = radial([&](double x) { return std::pow(p_modulus(x, theta), -a) * std::pow(1 + x, delta); }, d, theta, rel_tol);
  QuadResult out;
  out.value = r.inner + r.outer;
  out.converged = r.converged;
  out.error_estimate = rel_tol * out.value;
  return out;
}

nlohmann::json C2Result::to_json() const {
  return {{"term1", term1}, {"term2", term2}, {"value", value()}, {"exact", exact}, {"converged", converged}};
}

C2Result c2_integral(cplx s, double theta, int d, double c, double rel_tol) {
  check_theta(theta);
  if (std::abs(s.real() - 1.0) > 1e-12) throw std::invalid_argument("c2_integral: Re s must equal 1");
  if (!(c > d - 1)) throw std::invalid_argument("c2_integral: c must exceed d - 1");
  const double tau = s.imag(), a = (d + 1) / 2.0;
  C2Result out;
  const Radial t1 = radial([&](double r) { return std::abs(tau) * r * std::pow(1 + r, -c) / p_modulus(r, theta); }, d, theta, rel_tol);
  const Radial t2 = radial([&](double r) { return std::abs(s) * std::pow(1 + r, -c - 1); }, d, theta, rel_tol);
  // Radial derivative of |P|^{-a(1-s)} (1+r)^{-cs}; the first factor is unimodular.
  const Radial ex = radial(
      [&](double r) {
        const cplx pr = std::polar(1.0, 2 * theta) + r * r;
        const cplx v = cplx(0, a * tau) * 2.0 * r * pr.real() / std::norm(pr) - c * s / (1 + r);
        return std::abs(v) * std::pow(1 + r, -c);
      },
      d, theta, rel_tol);
  out.term1 = t1.inner + t1.outer;
  out.term2 = t2.inner + t2.outer;
  out.exact = ex.inner + ex.outer;
  out.converged = t1.converged && t2.converged && ex.converged;
  return out;
}

nlohmann::json C3Result::to_json() const {
  return {{"inner", inner}, {"outer", outer}, {"value", value()}, {"converged", converged}};
}

C3Result c3_integral(double epsilon, double theta, int d, double c, double rel_tol) {
  check_theta(theta);
  if (!(epsilon > 0)) throw std::invalid_argument("c3_integral: epsilon must be positive");
  if (!(c > 0)) throw std::invalid_argument("c3_integral: c must be positive");
  if (!(epsilon * (c - d - 1) < 1)) throw std::invalid_argument("c3_integral: eps (c - d - 1) must be below 1");
  const double a = (d + 1) / 2.0;
  const Radial r = radial(
      [&](double x) { return std::pow(p_modulus(x, theta), -a * (1 + epsilon)) * std::pow(1 + x, c * epsilon); }, d, theta,
      rel_tol);
  return {r.inner, r.outer, r.converged};
}

nlohmann::json HormanderResult::to_json() const {
  return {{"value", value}, {"tail_bound", tail_bound}, {"radius", radius}, {"converged", converged}};
}

HormanderResult hormander_integral(double y_norm, const KernelParams& params, int k, double rel_tol) {
  params.validate();
  if (!(y_norm >= 0) || !std::isfinite(y_norm)) throw std::invalid_argument("hormander_integral: |y| must be finite");
  HormanderResult out;
  if (y_norm == 0.0) return out;
  KernelParams kp = params;
  kp.t = std::ldexp(params.t, k);
  kp.normalized = false;
  const int d = kp.d;
  const double tt = kp.t, y = y_norm, a = (d + 1) / 2.0;
  const cplx z = std::polar(tt, kp.theta);
  // p(r2 + shift) - p(r2), accurate when the shift is small against |z^2 + r2|.
  auto diff = [&, z, a](double r2, double shift) {
    const cplx w = z * z + r2;
    return std::abs(z * std::pow(w, -a) * power_increment(shift / w, a));
  };
  // Relative radii where |z^2 + rho^2| changes regime.
  std::vector<double> rho = regime_radii(kp.theta);

  const double r_min = 2 * y;
  double radius = std::max({r_min, 4 * tt, 2 * y}) * 4;
  auto tail = [&](double r) {
    return sphere_area(d) * y * (d + 1) * tt * std::pow(4.0 / 3.0, a + 1) * std::exp2(d + 1) / (r * r);
  };

  RealFn radial_density;
  std::vector<double> breaks;
  if (d == 1) {
    // Both half-lines, the negative one reflected onto [2y, inf).
    radial_density = [&](double u) { return diff(u * u, y * y - 2 * u * y) + diff(u * u, y * y + 2 * u * y); };
    for (double r : rho) {
      breaks.push_back(tt * r);
      breaks.push_back(y + tt * r);
      breaks.push_back(tt * r - y);
    }
  } else {
    const double wsph = sphere_area(d - 1);
    radial_density = [&, wsph](double r) {
      // |x - y| = |x| zeroes the difference, leaving a corner in the modulus.
      std::vector<double> angles{std::acos(y / (2 * r))};
      for (double q : rho) {
        const double cphi = (r * r + y * y - tt * tt * q * q) / (2 * r * y);
        if (cphi > -1 && cphi < 1) angles.push_back(std::acos(cphi));
      }
      const RealFn ang = [&](double phi) {
        return diff(r * r, y * y - 2 * r * y * std::cos(phi)) * std::pow(std::sin(phi), d - 2);
      };
      return wsph * integrate(ang, 0.0, kPi, 0.01 * rel_tol, angles).value * std::pow(r, d - 1);
    };
    for (double r : rho) {
      breaks.push_back(tt * r);
      breaks.push_back(y + tt * r);
      breaks.push_back(std::abs(tt * r - y));
    }
  }
  QuadResult core = integrate(radial_density, r_min, radius, rel_tol, breaks);
  out.value = core.value;
  out.converged = core.converged;
  for (int j = 0; j < 200 && tail(radius) > 0.1 * rel_tol * out.value; ++j) {
    const QuadResult pnl = integrate(radial_density, radius, 2 * radius, rel_tol);
    out.value += pnl.value;
    out.converged = out.converged && pnl.converged;
    radius *= 2;
  }
  out.radius = radius;
  out.tail_bound = tail(radius);
  if (out.tail_bound > rel_tol * out.value) throw std::runtime_error("hormander_integral: tail bound exceeds tolerance");
  return out;
}

double dini_bound(double c4, double c3, double c2, double epsilon, double delta) {
  if (!(c4 > 0) || !(c3 > 0) || !(c2 > 0)) throw std::invalid_argument("dini_bound: constants must be positive");
  if (!(epsilon > 0) || !(delta > 0) || !(delta < 1)) throw std::invalid_argument("dini_bound: need eps > 0 and delta in (0, 1)");
  const double v = epsilon / (1 + epsilon);
  const double beta = std::min(v, delta);
  return (c4 + std::pow(c3, 1 - v) * std::pow(c2, v)) / beta;
}

DiniExponents dini_exponents(int d, double epsilon) {
  const double a = (d + 1) / 2.0;
  DiniExponents e;
  e.stated = -epsilon / (1 + epsilon) - a + 1 / (1 + epsilon);
  e.eps_tilde = 1 - (1 - epsilon) / (1 + epsilon);
  e.simplified = -(d - 1) / 2.0 + e.eps_tilde;
  e.identity = -(d - 1) / 2.0 - e.eps_tilde;
  return e;
}

nlohmann::json DiniExponents::to_json() const {
  return {{"stated", stated}, {"eps_tilde", eps_tilde}, {"simplified", simplified}, {"identity", identity}};
}

std::vector<double> theta_sweep(int j_min, int j_max) {
  if (j_min > j_max || j_min < 1) throw std::invalid_argument("theta_sweep: bad index range");
  std::vector<double> out;
  for (int j = j_min; j <= j_max; ++j) out.push_back(kPi / 2 - std::exp2(-j));
  return out;
}

LinearFit theta_scaling_fit(std::span<const std::pair<double, double>> values) {
  if (values.size() < 4) throw std::invalid_argument("theta_scaling_fit: at least 4 points required");
  std::vector<double> x, y;
  for (const auto& [theta, q] : values) {
    check_theta(theta);
    if (!(q > 0)) throw std::invalid_argument("theta_scaling_fit: quantities must be positive");
    x.push_back(std::log(theta_gap(theta)));
    y.push_back(std::log(q));
  }
  return least_squares(x, y);
}

}  // namespace mlab
