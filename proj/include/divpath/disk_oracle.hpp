#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <vector>

#include "divpath/divergence.hpp"
#include "divpath/mesh.hpp"

namespace divpath {

using Complex = std::complex<double>;

inline Vec2 to_vec(Complex z) { return {z.real(), z.imag()}; }
inline Complex to_complex(const Vec2& v) { return {v.x(), v.y()}; }

/// Closed forms on the unit disk.
double disk_green(Complex w, Complex z);
double disk_neumann(Complex w, Complex z);
/// Boundary density at |s| = 1 seen from z (per unit arc length).
double disk_poisson(Complex s, Complex z);
double hyperbolic_distance(Complex w, Complex z);

enum class ProfileKind { D, HB, KL, TV, Chi2, GenericF };

/// Distance from the origin as a function of x = |z|: d = g(x), and the
/// gradient factor r(x) = g'(x) / x so that grad d(z) = r(|z|) z.
class RadialProfile {
 public:
  ProfileKind kind() const { return kind_; }
  double g(double x) const;
  double r(double x) const;
  /// g'(x); centred difference with step 1e-6 x for the generic kind.
  double dg(double x) const;

 private:
  friend RadialProfile radial_profile(ProfileKind kind);
  friend RadialProfile radial_profile(const FDivergence& f, double tol);

  ProfileKind kind_ = ProfileKind::D;
  std::shared_ptr<const FDivergence> f_;
  double tol_ = 1e-13;
};

/// Closed-form rows of the comparison table. GenericF is rejected here.
RadialProfile radial_profile(ProfileKind kind);
/// g(x) = (1/2pi) int_0^{2pi} f((1 - x^2) / (1 - 2x cos phi + x^2)) dphi by
/// adaptive quadrature.
RadialProfile radial_profile(const FDivergence& f, double tol = 1e-13);

/// C(z) = (z - p) / (1 - conj(p) z).
struct MobiusMap {
  Complex p;
  Complex operator()(Complex z) const { return (z - p) / (1.0 - std::conj(p) * z); }
  Complex derivative(Complex z) const {
    const Complex d = 1.0 - std::conj(p) * z;
    return (1.0 - std::norm(p)) / (d * d);
  }
};

MobiusMap mobius_to_origin(Complex p);

/// Samples the arc through p and q orthogonal to the unit circle (a straight
/// segment when p, q and 0 are collinear). samples >= 2 points, endpoints
/// exactly p and q.
std::vector<Complex> hyperbolic_geodesic(Complex p, Complex q, int samples);

struct GeodesicCircle {
  bool straight = true;
  Complex centre;
  double radius = 0.0;
};
GeodesicCircle geodesic_circle(Complex p, Complex q);

/// Gradient at q of the distance to p whose radial profile is given.
Vec2 disk_dv_gradient(const RadialProfile& profile, Complex p, Complex q);

/// Boundary integral of P(s,q) f(P(s,p) / P(s,q)) over the unit circle.
double disk_dv_numeric(const FDivergence& f, Complex p, Complex q, double tol = 1e-12);

}  // namespace divpath
