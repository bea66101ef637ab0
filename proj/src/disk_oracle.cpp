#include "divpath/disk_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <vector>
#include <numbers>

#include "divpath/error.hpp"
#include "divpath/quadrature.hpp"

namespace divpath {

namespace {

constexpr double kPi = std::numbers::pi;

void require_interior(Complex z, const char* what) {
  if (!(std::abs(z) < 1.0)) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must lie inside the unit disk");
}

}  // namespace

double disk_green(Complex w, Complex z) {
  require_interior(w, "w");
  require_interior(z, "z");
  if (w == z) throw Error(ErrorCode::InvalidArgument, "disk_green: w equals z");
  return -std::log(std::abs(w - z) / std::abs(1.0 - std::conj(z) * w)) / (2.0 * kPi);
}

double disk_neumann(Complex w, Complex z) {
  require_interior(w, "w");
  require_interior(z, "z");
  if (w == z) throw Error(ErrorCode::InvalidArgument, "disk_neumann: w equals z");
  return -std::log(std::abs(w - z) * std::abs(1.0 - std::conj(z) * w)) / (2.0 * kPi);
}

double disk_poisson(Complex s, Complex z) {
  require_interior(z, "z");
  return (1.0 - std::norm(z)) / (2.0 * kPi * std::norm(s - z));
}

double hyperbolic_distance(Complex w, Complex z) {
  require_interior(w, "w");
  require_interior(z, "z");
  return 2.0 * std::atanh(std::abs(w - z) / std::abs(1.0 - std::conj(w) * z));
}

RadialProfile radial_profile(ProfileKind kind) {
  if (kind == ProfileKind::GenericF) {
    throw Error(ErrorCode::InvalidArgument, "generic profile needs an f-divergence");
  }
  RadialProfile p;
  p.kind_ = kind;
  return p;
}

RadialProfile radial_profile(const FDivergence& f, double tol) {
  RadialProfile p;
  p.kind_ = ProfileKind::GenericF;
  p.f_ = std::make_shared<const FDivergence>(f);
  p.tol_ = tol;
  return p;
}

double RadialProfile::g(double x) const {
  if (!(x >= 0.0 && x < 1.0)) throw Error(ErrorCode::InvalidArgument, "radial profile needs 0 <= x < 1");
  switch (kind_) {
    case ProfileKind::D:
      if (x == 0.0) throw Error(ErrorCode::InvalidArgument, "D profile is singular at 0");
      return std::log(x) / (2.0 * kPi);
    case ProfileKind::HB:
      return std::log((1.0 + x) / (1.0 - x));
    case ProfileKind::KL:
      return -std::log(1.0 - x * x);
    case ProfileKind::TV:
      return 4.0 / kPi * std::asin(x);
    case ProfileKind::Chi2:
      return (1.0 + x * x) / (1.0 - x * x);
    case ProfileKind::GenericF: {
      const auto& fn = f_->f;
      const double a = 1.0 - x * x;
      // Integrand is even in phi, so integrate over [0, pi] and double.
      const auto integrand = [&](double phi) { return fn(a / (1.0 - 2.0 * x * std::cos(phi) + x * x)); };
      const QuadratureResult q = integrate_adaptive(integrand, 0.0, kPi, tol_ * kPi, 0.0, 20000);
      return q.value / kPi;
    }
  }
  return 0.0;
}

double RadialProfile::dg(double x) const {
  if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::InvalidArgument, "profile derivative needs 0 < x < 1");
  switch (kind_) {
    case ProfileKind::D:
      return 1.0 / (2.0 * kPi * x);
    case ProfileKind::HB:
      return 2.0 / (1.0 - x * x);
    case ProfileKind::KL:
      return 2.0 * x / (1.0 - x * x);
    case ProfileKind::TV:
      return 4.0 / (kPi * std::sqrt(1.0 - x * x));
    case ProfileKind::Chi2: {
      const double d = 1.0 - x * x;
      return 4.0 * x / (d * d);
    }
    case ProfileKind::GenericF: {
      const double h = 1e-6 * x;
      return (g(x + h) - g(x - h)) / (2.0 * h);
    }
  }
  return 0.0;
}

double RadialProfile::r(double x) const { return dg(x) / x; }

MobiusMap mobius_to_origin(Complex p) {
  require_interior(p, "p");
  return MobiusMap{p};
}

GeodesicCircle geodesic_circle(Complex p, Complex q) {
  GeodesicCircle c;
  const double det = p.real() * q.imag() - p.imag() * q.real();
  if (std::abs(det) <= 1e-14 * std::abs(p) * std::abs(q) || std::abs(p) == 0.0 || std::abs(q) == 0.0) return c;
  // 2 Re(conj(c) z) = 1 + |z|^2 for z = p, q.
  const double bp = 0.5 * (1.0 + std::norm(p)), bq = 0.5 * (1.0 + std::norm(q));
  const double cx = (bp * q.imag() - bq * p.imag()) / det;
  const double cy = (p.real() * bq - q.real() * bp) / det;
  c.straight = false;
  c.centre = {cx, cy};
  c.radius = std::sqrt(std::norm(c.centre) - 1.0);
  return c;
}

std::vector<Complex> hyperbolic_geodesic(Complex p, Complex q, int samples) {
  require_interior(p, "p");
  require_interior(q, "q");
  if (p == q) throw Error(ErrorCode::InvalidArgument, "hyperbolic_geodesic: p equals q");
  samples = std::max(samples, 2);
  std::vector<Complex> out(samples);
  const GeodesicCircle c = geodesic_circle(p, q);
  if (c.straight) {
    for (int i = 0; i < samples; ++i) out[i] = p + (q - p) * (static_cast<double>(i) / (samples - 1));
  } else {
    const double ap = std::arg(p - c.centre);
    double delta = std::arg(q - c.centre) - ap;
    while (delta > kPi) delta -= 2.0 * kPi;
    while (delta <= -kPi) delta += 2.0 * kPi;
    for (int i = 0; i < samples; ++i) {
      out[i] = c.centre + std::polar(c.radius, ap + delta * static_cast<double>(i) / (samples - 1));
    }
  }
  out.front() = p;
  out.back() = q;
  return out;
}

Vec2 disk_dv_gradient(const RadialProfile& profile, Complex p, Complex q) {
  require_interior(p, "p");
  require_interior(q, "q");
  if (p == q) throw Error(ErrorCode::InvalidArgument, "disk_dv_gradient: q equals p");
  const double x = std::abs(mobius_to_origin(p)(q));
  const Complex g = profile.r(x) * (1.0 - std::norm(p)) / std::norm(1.0 - std::conj(p) * q) * (q - p) /
                    (1.0 - p * std::conj(q));
  return to_vec(g);
}

double disk_dv_numeric(const FDivergence& f, Complex p, Complex q, double tol) {
  require_interior(p, "p");
  require_interior(q, "q");
  const auto integrand = [&](double theta) {
    const Complex s = std::polar(1.0, theta);
    const double pq = disk_poisson(s, q), pp = disk_poisson(s, p);
    return pq * f.f(pp / pq);
  };
  // Break at the kernel peaks and where P(s,p) = P(s,q): on the circle that
  // is Re(conj(s) c) = d, and f may have a kink there.
  std::vector<double> cuts = {0.0, 2.0 * kPi};
  auto add = [&](double t) {
    t = std::fmod(t, 2.0 * kPi);
    cuts.push_back(t < 0.0 ? t + 2.0 * kPi : t);
  };
  add(std::arg(p));
  add(std::arg(q));
  const Complex c = 2.0 * ((1.0 - std::norm(q)) * p - (1.0 - std::norm(p)) * q);
  const double d = 2.0 * (std::norm(p) - std::norm(q));
  if (std::abs(c) > 0.0 && std::abs(d) <= std::abs(c)) {
    const double a = std::acos(d / std::abs(c));
    add(std::arg(c) + a);
    add(std::arg(c) - a);
  }
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] > cuts[i - 1]) sum += integrate_adaptive(integrand, cuts[i - 1], cuts[i], tol / 8.0, 0.0, 5000).value;
  }
  return sum;
}

}  // namespace divpath
