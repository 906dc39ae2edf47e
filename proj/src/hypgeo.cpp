#include "densedisc/hypgeo.hpp"

#include <cmath>
#include <stdexcept>

#include "densedisc/errors.hpp"

namespace densedisc {

namespace {

// 1 - |z|^2 without cancellation near the boundary.
double one_minus_sq(cplx z) {
  const double r = std::abs(z);
  return (1.0 - r) * (1.0 + r);
}

}  // namespace

DiscPoint::DiscPoint(cplx z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || !(std::abs(z) < 1.0))
    throw DomainError("point is not in the open unit disc");
}

double poincare_distance(DiscPoint zp, DiscPoint wp) {
  const cplx z = zp.value(), w = wp.value();
  const cplx den = 1.0 - std::conj(w) * z;
  const double t = std::abs(z - w) / std::abs(den);
  // d = 2 artanh t = log((1+t)^2 / (1 - t^2)), with 1 - t^2 written as a product
  // so that points close to the circle keep their relative accuracy.
  const double one_minus_t2 = one_minus_sq(z) * one_minus_sq(w) / std::norm(den);
  return 2.0 * std::log1p(t) - std::log(one_minus_t2);
}

double poincare_distance(cplx z, cplx w) {
  return poincare_distance(DiscPoint(z), DiscPoint(w));
}

bool drift_ok(DiscPoint old, DiscPoint now, int n) {
  if (n < 1) throw std::invalid_argument("drift_ok: stage index must be >= 1");
  return poincare_distance(old, now) < std::ldexp(1.0, -n);
}

DiscAutomorphism::DiscAutomorphism(double theta, cplx a)
    : rot_(std::polar(1.0, theta)), a_(DiscPoint(a).value()) {}

cplx DiscAutomorphism::operator()(cplx z) const {
  return rot_ * (z - a_) / (1.0 - std::conj(a_) * z);
}

}  // namespace densedisc
