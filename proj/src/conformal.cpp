#include "densedisc/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "densedisc/errors.hpp"

namespace densedisc {

namespace {

constexpr double pi = std::numbers::pi;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

double segment_distance(cplx p, cplx a, cplx b) {
  const cplx ab = b - a;
  const double len2 = std::norm(ab);
  double t = len2 > 0 ? ((p - a) * std::conj(ab)).real() / len2 : 0;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * ab));
}

bool segments_cross(cplx a, cplx b, cplx c, cplx d) {
  const double d1 = cross(b - a, c - a), d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c), d4 = cross(d - c, b - c);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  // touching counts as an intersection for non-adjacent edges
  auto on = [](cplx p, cplx q, cplx r) { return segment_distance(r, p, q) == 0; };
  return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

// square root with values in the closed upper half-plane
cplx sqrt_h(cplx v) { return cplx(0, 1) * std::sqrt(-v); }

void append_segment(std::vector<cplx>& out, cplx a, cplx b, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / h)));
  for (int k = 0; k < n; ++k) out.push_back(a + (b - a) * (double(k) / n));
}

void append_arc(std::vector<cplx>& out, cplx center, double radius, double t0, double t1, double h) {
  const int n = std::max(1, static_cast<int>(std::ceil(radius * (t1 - t0) / h)));
  for (int k = 0; k < n; ++k) out.push_back(center + std::polar(radius, t0 + (t1 - t0) * k / n));
}

}  // namespace

DomainSpec::DomainSpec(std::vector<cplx> vertices, double delta)
    : vertices_(std::move(vertices)), delta_(delta) {
  const std::size_t n = vertices_.size();
  if (n < 64) throw ConfigError("domain polygon needs at least 64 vertices");
  for (const auto& v : vertices_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw ConfigError("domain vertex is not finite");
  double area = 0;
  for (std::size_t i = 0; i < n; ++i) area += cross(vertices_[i], vertices_[(i + 1) % n]);
  if (!(area > 0)) throw ConfigError("domain polygon is not counterclockwise");
  for (std::size_t i = 0; i < n; ++i) {
    const cplx a = vertices_[i], b = vertices_[(i + 1) % n];
    if (a == b) throw ConfigError("domain polygon has a repeated vertex");
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
      if (segments_cross(a, b, vertices_[j], vertices_[(j + 1) % n]))
        throw ConfigError("domain polygon is not simple");
    }
  }
}

bool DomainSpec::contains(cplx w) const {
  const std::size_t n = vertices_.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const cplx a = vertices_[i], b = vertices_[j];
    if ((a.imag() > w.imag()) != (b.imag() > w.imag())) {
      const double x = (b.real() - a.real()) * (w.imag() - a.imag()) / (b.imag() - a.imag()) + a.real();
      if (w.real() < x) inside = !inside;
    }
  }
  return inside && boundary_distance(w) > 0;
}

double DomainSpec::boundary_distance(cplx w) const {
  double best = INFINITY;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0; i < n; ++i)
    best = std::min(best, segment_distance(w, vertices_[i], vertices_[(i + 1) % n]));
  return best;
}

DomainSpec build_domain(double delta, int resolution) {
  if (!(delta > 0 && delta <= 0.5)) throw ConfigError("build_domain: delta must lie in (0, 0.5]");
  if (resolution < 64) throw ConfigError("build_domain: resolution must be at least 64");
  const double R = 1 + delta;
  const double alpha = std::asin(delta / R);
  const double x0 = R * std::cos(alpha);
  const double perimeter = 2 * R * (pi - alpha) + 2 * (2 - x0) + pi * delta;
  const double h = perimeter / resolution;
  const double hf = std::min(h, delta / 2);  // the finger is resolved across its width

  std::vector<cplx> v;
  append_arc(v, 0, R, pi, 2 * pi - alpha, h);
  append_segment(v, cplx(x0, -delta), cplx(2, -delta), hf);
  append_arc(v, 2, delta, -pi / 2, pi / 2, hf);
  append_segment(v, cplx(2, delta), cplx(x0, delta), hf);
  append_arc(v, 0, R, alpha, pi, h);
  return DomainSpec(std::move(v), delta);
}

DomainSpec build_disc_domain(double radius, int resolution) {
  if (!(radius > 0)) throw ConfigError("build_disc_domain: radius must be positive");
  if (resolution < 64) throw ConfigError("build_disc_domain: resolution must be at least 64");
  std::vector<cplx> v;
  for (int k = 0; k < resolution; ++k) v.push_back(std::polar(radius, pi + 2 * pi * k / resolution));
  return DomainSpec(std::move(v), radius - 1);
}

ZipperMap ZipperMap::identity() { return ZipperMap(); }

cplx ZipperMap::to_half_plane(cplx w, cplx* deriv) const {
  const cplx m = (w - z1_) / (w - z0_);
  cplx y = cplx(0, 1) * std::sqrt(m);
  cplx d = 0;
  if (deriv) d = cplx(0, 1) * 0.5 / std::sqrt(m) * (z1_ - z0_) / ((w - z0_) * (w - z0_));
  for (const auto& s : slits_) {
    const cplx den = 1.0 - s.b * y;
    const cplx t = y / den;
    const cplx r = sqrt_h(t * t + s.cinv * s.cinv);
    const cplx den2 = 1.0 - r * s.qinv;
    if (deriv) d *= (1.0 / (den * den)) * (t / r) * (1.0 / (den2 * den2));
    y = r / den2;
  }
  if (deriv) *deriv = d * (-2.0 * y);
  return -y * y;
}

cplx ZipperMap::from_half_plane(cplx u) const {
  cplx y = -std::sqrt(-u);  // second quadrant
  for (auto it = slits_.rbegin(); it != slits_.rend(); ++it) {
    const cplx r = y / (1.0 + y * it->qinv);
    const cplx t = sqrt_h(r * r - it->cinv * it->cinv);
    y = t / (1.0 + it->b * t);
  }
  const cplx m = -y * y;
  return (z1_ - m * z0_) / (1.0 - m);
}

cplx ZipperMap::inverse(cplx w) const {
  if (identity_) return w;
  const cplx u = to_half_plane(w, nullptr);
  return rot_ * (u - w0_) / (u - std::conj(w0_));
}

cplx ZipperMap::forward(cplx zeta) const {
  if (identity_) return zeta;
  const cplx z = zeta / rot_;
  const cplx u = (w0_ - z * std::conj(w0_)) / (1.0 - z);
  return from_half_plane(u);
}

cplx ZipperMap::derivative_at_zero() const {
  if (identity_) return 1;
  cplx d;
  to_half_plane(0, &d);
  // d/du of the Cayley part at w0 is 1 / (w0 - conj(w0))
  return 1.0 / (rot_ * d / (w0_ - std::conj(w0_)));
}

ZipperMap riemann_map(const DomainSpec& dom) {
  const auto& v = dom.vertices();
  const std::size_t n = v.size();
  if (!dom.contains(0)) throw ConfigError("riemann_map: the domain must contain 0");
  ZipperMap map;
  map.identity_ = false;
  map.domain_ = std::make_shared<DomainSpec>(dom);
  map.z0_ = v[0];
  map.z1_ = v[1];

  std::vector<cplx> z(n);
  for (std::size_t k = 2; k < n; ++k) z[k] = cplx(0, 1) * std::sqrt((v[k] - v[1]) / (v[k] - v[0]));
  std::vector<double> xs(n, 0);
  map.slits_.reserve(n - 2);
  for (std::size_t k = 2; k < n; ++k) {
    const cplx a = z[k];
    if (!(a.imag() > 0) || !std::isfinite(a.real()))
      throw ZipperBreakdown("zipper breakdown: vertex image left the upper half-plane", k);
    const double a2 = std::norm(a);
    ZipperMap::Slit s{a.real() / a2, a2 / a.imag(), 0};
    const double c = a.imag() / a2;
    s.qinv = -s.b * c * std::sqrt(a2);
    map.slits_.push_back(s);
    // processed vertices sit on the real axis; track them there so that the
    // side of each slit is decided by order, not by the sign of a rounding error
    for (std::size_t j = 1; j < k; ++j) {
      const double t = xs[j] / (1.0 - s.b * xs[j]);
      const double r = (t > 0 ? 1.0 : -1.0) * std::sqrt(t * t + s.cinv * s.cinv);
      xs[j] = r / (1.0 - r * s.qinv);
    }
    xs[k] = 0;
    for (std::size_t j = k + 1; j < n; ++j) {
      const cplx t = z[j] / (1.0 - s.b * z[j]);
      const cplx r = sqrt_h(t * t + s.cinv * s.cinv);
      z[j] = r / (1.0 - r * s.qinv);
    }
  }

  cplx d;
  map.w0_ = map.to_half_plane(0, &d);
  if (!(map.w0_.imag() > 0)) throw ZipperBreakdown("zipper breakdown: interior point not mapped inside", 0);
  const cplx lead = d / (map.w0_ - std::conj(map.w0_));
  map.rot_ = std::conj(lead) / std::abs(lead);

  // Vertex preimages on the circle. Probing just inside the circle only
  // measures the map if the probe offset is small against the preimage
  // spacing; vertices whose preimages are not separated in double precision
  // (crowding in thin channels) are counted, not probed.
  std::vector<cplx> pre(n);
  pre[0] = map.rot_;
  for (std::size_t k = 1; k < n; ++k) {
    const cplx u = -xs[k] * xs[k];
    pre[k] = map.rot_ * (u - map.w0_) / (u - std::conj(map.w0_));
  }
  double defect = 0;
  std::size_t crowded = 0;
  for (std::size_t k = 1; k < n; ++k) {
    const double gap = std::min(std::abs(pre[k] - pre[k - 1]), std::abs(pre[(k + 1) % n] - pre[k]));
    if (gap < 1e-9) {
      ++crowded;
      continue;
    }
    const double eps = std::min(1e-10, 1e-3 * gap);
    defect = std::max(defect, std::abs(map.forward(pre[k] * (1 - eps)) - v[k]));
  }
  map.crowded_ = crowded;
  map.defect_ = defect;
  const double tol = 5e-3 * (1 + dom.delta());
  if (!(defect <= tol)) throw ZipperBreakdown("zipper boundary defect exceeds tolerance", 0);
  return map;
}

DiscPoint preimage(const ZipperMap& phi, cplx w) {
  if (phi.domain() && !phi.domain()->contains(w)) throw DomainError("preimage: point outside the domain");
  return DiscPoint(phi.inverse(w));
}

std::vector<double> convergence_report(std::span<const ZipperMap> maps, double rho, int samples) {
  if (!(rho > 0 && rho < 1)) throw ConfigError("convergence_report: rho must lie in (0, 1)");
  for (std::size_t k = 1; k < maps.size(); ++k) {
    const auto* a = maps[k - 1].domain();
    const auto* b = maps[k].domain();
    if (a && b && !(b->delta() < a->delta()))
      throw ConfigError("convergence_report: deltas must decrease strictly");
  }
  std::vector<double> out;
  for (const auto& phi : maps) {
    double e = 0;
    for (int j = 0; j < samples; ++j) {
      const cplx z = std::polar(rho, 2 * pi * j / samples);
      e = std::max(e, std::abs(phi.forward(z) - z));
    }
    out.push_back(e);
  }
  return out;
}

}  // namespace densedisc
