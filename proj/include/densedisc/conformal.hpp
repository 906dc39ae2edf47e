#pragma once

#include <complex>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "densedisc/hypgeo.hpp"

namespace densedisc {

// Simply connected polygonal domain given by a closed counterclockwise
// vertex list (the closing edge is implicit).
class DomainSpec {
 public:
  // Validates: at least 64 vertices, finite, simple, counterclockwise.
  DomainSpec(std::vector<cplx> vertices, double delta);

  double delta() const { return delta_; }
  const std::vector<cplx>& vertices() const { return vertices_; }
  bool contains(cplx w) const;
  double boundary_distance(cplx w) const;

 private:
  std::vector<cplx> vertices_;
  double delta_;
};

// Polygon for W = {|z| < 1 + delta} union {dist(z, [1, 2]) < delta}, with at
// least `resolution` vertices. Requires 0 < delta <= 0.5.
DomainSpec build_domain(double delta, int resolution);

// Regular polygon inscribed in |z| = radius (the delta field is radius - 1).
DomainSpec build_disc_domain(double radius, int resolution);

class ZipperBreakdown : public std::runtime_error {
 public:
  ZipperBreakdown(const std::string& what, std::size_t vertex)
      : std::runtime_error(what), vertex_(vertex) {}
  std::size_t vertex() const { return vertex_; }

 private:
  std::size_t vertex_;
};

// Conformal map from the unit disc onto a polygonal domain, built by the
// geodesic zipper algorithm and normalized by phi(0) = 0, phi'(0) > 0.
class ZipperMap {
 public:
  static ZipperMap identity();

  cplx forward(cplx zeta) const;  // disc -> domain
  cplx inverse(cplx w) const;     // domain -> disc
  cplx derivative_at_zero() const;

  const DomainSpec* domain() const { return domain_.get(); }
  double boundary_defect() const { return defect_; }
  // vertices whose disc preimages coincide in double precision
  std::size_t crowded_vertices() const { return crowded_; }

  struct Slit {
    double b;     // Re a / |a|^2
    double cinv;  // |a|^2 / Im a
    double qinv;  // 1 / image of infinity before the last Moebius step
  };

 private:
  friend ZipperMap riemann_map(const DomainSpec& d);

  cplx to_half_plane(cplx w, cplx* deriv) const;
  cplx from_half_plane(cplx u) const;

  std::shared_ptr<const DomainSpec> domain_;
  cplx z0_ = 0, z1_ = 0;
  std::vector<Slit> slits_;
  cplx w0_ = 0;   // image of the domain point 0 in the upper half-plane
  cplx rot_ = 1;  // unimodular factor fixing arg phi'(0) = 0
  bool identity_ = true;
  double defect_ = 0;
  std::size_t crowded_ = 0;
};

// Throws ZipperBreakdown if the vertex list cannot be zipped, or if the
// boundary reproduced by the map misses a vertex by more than 5e-3 (1 + delta).
ZipperMap riemann_map(const DomainSpec& d);

// phi^{-1}(w). Throws DomainError if w is outside the domain.
DiscPoint preimage(const ZipperMap& phi, cplx w);

// e_k = max_{|z| = rho} |phi_k(z) - z| for each map; rho must lie in (0, 1).
std::vector<double> convergence_report(std::span<const ZipperMap> maps, double rho,
                                       int samples = 512);

}  // namespace densedisc
