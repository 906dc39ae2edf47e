#pragma once

#include <complex>

namespace densedisc {

using cplx = std::complex<double>;

// A point of the open unit disc. Construction throws DomainError if |z| >= 1.
class DiscPoint {
 public:
  explicit DiscPoint(cplx z);
  cplx value() const { return z_; }

 private:
  cplx z_;
};

// Hyperbolic distance for the curvature -1 metric 2|dz|/(1-|z|^2).
double poincare_distance(DiscPoint z, DiscPoint w);
double poincare_distance(cplx z, cplx w);

// True iff the move old -> now is shorter than 2^-n. Requires n >= 1.
bool drift_ok(DiscPoint old, DiscPoint now, int n);

// Disc automorphism z -> e^{i theta} (z - a) / (1 - conj(a) z), |a| < 1.
class DiscAutomorphism {
 public:
  DiscAutomorphism(double theta, cplx a);
  cplx operator()(cplx z) const;

 private:
  cplx rot_;
  cplx a_;
};

}  // namespace densedisc
