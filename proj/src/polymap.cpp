#include "densedisc/polymap.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "densedisc/errors.hpp"

namespace densedisc {

double norm(const Point& v) {
  double s = 0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw ConfigError("distance: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

namespace {

void strip(std::vector<cplx>& c) {
  while (c.size() > 1 && c.back() == cplx(0)) c.pop_back();
  if (c.empty()) c.push_back(0);
}

std::vector<cplx> combine(const std::vector<cplx>& a, const std::vector<cplx>& b, double sign) {
  std::vector<cplx> out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) out[i] += sign * b[i];
  return out;
}

}  // namespace

PolyMap::PolyMap(std::vector<std::vector<cplx>> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw ConfigError("PolyMap needs at least one coordinate");
  for (auto& c : coords_) {
    for (const auto& x : c)
      if (!std::isfinite(x.real()) || !std::isfinite(x.imag()))
        throw ConfigError("PolyMap coefficient is not finite");
    strip(c);
  }
}

PolyMap PolyMap::zero(std::size_t m) {
  return PolyMap(std::vector<std::vector<cplx>>(m, std::vector<cplx>{0}));
}

PolyMap PolyMap::constant(const Point& c) {
  std::vector<std::vector<cplx>> coords;
  for (const auto& x : c) coords.push_back({x});
  return PolyMap(std::move(coords));
}

int PolyMap::degree() const {
  std::size_t d = 0;
  for (const auto& c : coords_) d = std::max(d, c.size() - 1);
  return static_cast<int>(d);
}

cplx horner(std::span<const cplx> c, cplx z) {
  cplx acc = 0;
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * z + c[k];
  return acc;
}

cplx PolyMap::eval_coord(std::size_t i, cplx z) const { return horner(coords_[i], z); }

Point PolyMap::operator()(cplx z) const {
  Point out(coords_.size());
  for (std::size_t i = 0; i < coords_.size(); ++i) out[i] = horner(coords_[i], z);
  return out;
}

Point eval(const PolyMap& p, cplx z) { return p(z); }

PolyMap PolyMap::operator+(const PolyMap& o) const {
  if (dim() != o.dim()) throw ConfigError("PolyMap dimension mismatch");
  std::vector<std::vector<cplx>> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(combine(coords_[i], o.coords_[i], 1.0));
  return PolyMap(std::move(out));
}

PolyMap PolyMap::operator-(const PolyMap& o) const {
  if (dim() != o.dim()) throw ConfigError("PolyMap dimension mismatch");
  std::vector<std::vector<cplx>> out;
  for (std::size_t i = 0; i < dim(); ++i) out.push_back(combine(coords_[i], o.coords_[i], -1.0));
  return PolyMap(std::move(out));
}

std::size_t sup_norm_samples(int degree, std::size_t requested) {
  const std::size_t d = static_cast<std::size_t>(std::max(degree, 0));
  std::size_t n = requested ? requested : std::clamp<std::size_t>(8 * d, 256, 16384);
  // The sampled maximum needs more than 2D points per circle to bound the true one.
  return std::max(n, 2 * d + 2);
}

double sup_norm(const PolyMap& p, const PolyMap& q, double radius, SupNormOptions opt) {
  if (p.dim() != q.dim()) throw ConfigError("sup_norm: dimension mismatch");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("sup_norm: radius must be positive");
  const PolyMap diff = p - q;
  const int deg = diff.degree();
  const std::size_t n = sup_norm_samples(deg, opt.samples);
  double best = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const cplx z = std::polar(radius, 2 * std::numbers::pi * double(j) / double(n));
    best = std::max(best, norm(diff(z)));
  }
  // Along the circle |P|^2 is a trigonometric polynomial; after removing the
  // phase e^{iD theta/2}, Re(u * P) has degree D/2 and the Ehlich-Zeller bound
  // gives max <= sampled max / cos(pi D / 2n).
  const double sec = 1.0 / std::cos(std::numbers::pi * double(deg) / (2.0 * double(n)));
  return best * std::max(1.0 + opt.eta, sec);
}

double TaylorResult::tail(double inner) const {
  const double q = inner / radius;
  if (q >= 1) return INFINITY;
  return max_modulus * std::pow(q, degree + 1) / (1 - q);
}

TaylorResult taylor_from_samples(const DiscMap& h, std::size_t m, double radius, int degree,
                                 std::size_t samples) {
  if (degree < 0) throw ConfigError("taylor_from_samples: negative degree");
  if (!(radius > 0) || !std::isfinite(radius)) throw ConfigError("taylor_from_samples: bad radius");
  const std::size_t need = 4 * (static_cast<std::size_t>(degree) + 1);
  if (samples == 0) samples = need;
  if (samples < need) throw ConfigError("taylor_from_samples: degree too large for sample count");

  const int n = static_cast<int>(samples);
  fftw_complex* buf = fftw_alloc_complex(samples);
  fftw_plan plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);

  std::vector<std::vector<cplx>> vals(m, std::vector<cplx>(samples));
  double maxmod = 0;
  for (std::size_t j = 0; j < samples; ++j) {
    const cplx z = std::polar(radius, 2 * std::numbers::pi * double(j) / double(samples));
    const Point v = h(z);
    if (v.size() != m) {
      fftw_destroy_plan(plan);
      fftw_free(buf);
      throw ConfigError("taylor_from_samples: sample has wrong dimension");
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
        fftw_destroy_plan(plan);
        fftw_free(buf);
        throw ConfigError("taylor_from_samples: non-finite sample");
      }
      vals[i][j] = v[i];
    }
    maxmod = std::max(maxmod, norm(v));
  }

  std::vector<std::vector<cplx>> coeffs(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < samples; ++j) {
      buf[j][0] = vals[i][j].real();
      buf[j][1] = vals[i][j].imag();
    }
    fftw_execute(plan);
    auto& c = coeffs[i];
    c.resize(static_cast<std::size_t>(degree) + 1);
    double scale = 1.0 / double(samples);
    for (int d = 0; d <= degree; ++d) {
      c[d] = cplx(buf[d][0], buf[d][1]) * scale;
      scale /= radius;
    }
  }
  fftw_destroy_plan(plan);
  fftw_free(buf);
  return TaylorResult{PolyMap(std::move(coeffs)), radius, maxmod, degree};
}

NodeSet::NodeSet(std::vector<cplx> nodes, std::vector<Point> targets)
    : nodes_(std::move(nodes)), targets_(std::move(targets)) {
  if (nodes_.size() != targets_.size()) throw ConfigError("NodeSet: nodes/targets length mismatch");
  for (std::size_t j = 1; j < targets_.size(); ++j)
    if (targets_[j].size() != targets_[0].size()) throw ConfigError("NodeSet: mixed target dimensions");
  for (const auto& a : nodes_)
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw ConfigError("NodeSet: non-finite node");
  if (!nodes_.empty() && min_separation() == 0) throw ConfigError("NodeSet: duplicate nodes");
}

double NodeSet::min_separation() const {
  double best = INFINITY;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    for (std::size_t j = i + 1; j < nodes_.size(); ++j) best = std::min(best, std::abs(nodes_[i] - nodes_[j]));
  return best;
}

NewtonInterpolant::NewtonInterpolant(std::vector<cplx> nodes, std::vector<cplx> values)
    : nodes_(std::move(nodes)), dd_(std::move(values)) {
  if (nodes_.size() != dd_.size()) throw ConfigError("NewtonInterpolant: size mismatch");
  const std::size_t n = nodes_.size();
  for (std::size_t k = 1; k < n; ++k)
    for (std::size_t j = n - 1; j >= k; --j) {
      const cplx h = nodes_[j] - nodes_[j - k];
      if (h == cplx(0)) throw ConfigError("NewtonInterpolant: duplicate nodes");
      dd_[j] = (dd_[j] - dd_[j - 1]) / h;
    }
}

cplx NewtonInterpolant::operator()(cplx z) const {
  cplx acc = 0;
  for (std::size_t k = dd_.size(); k-- > 0;) acc = acc * (z - nodes_[k]) + dd_[k];
  return acc;
}

std::vector<cplx> NewtonInterpolant::monomial() const {
  std::vector<cplx> c{0};
  for (std::size_t k = dd_.size(); k-- > 0;) {
    // c <- c * (z - x_k) + dd_k
    std::vector<cplx> next(c.size() + 1, 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= c[i] * nodes_[k];
    }
    next[0] += dd_[k];
    c = std::move(next);
  }
  strip(c);
  return c;
}

namespace {

void check_dims(const PolyMap& p, const NodeSet& ns) {
  if (!ns.empty() && ns.targets()[0].size() != p.dim())
    throw ConfigError("interpolation targets do not match the map dimension");
}

// sup over the closed unit disc, sampled on the circle
double disc_size(const PolyMap& c) { return sup_norm(c, PolyMap::zero(c.dim()), 1.0); }

}  // namespace

Correction lagrange_correct(const PolyMap& p, const NodeSet& ns) {
  check_dims(p, ns);
  if (ns.empty()) return {p, 0, 0};
  const std::size_t m = p.dim();
  double maxres = 0;
  std::vector<std::vector<cplx>> res(m, std::vector<cplx>(ns.size()));
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const Point v = p(ns.nodes()[j]);
    for (std::size_t i = 0; i < m; ++i) res[i][j] = ns.targets()[j][i] - v[i];
    maxres = std::max(maxres, distance(v, ns.targets()[j]));
  }
  std::vector<std::vector<cplx>> corr(m);
  for (std::size_t i = 0; i < m; ++i) corr[i] = NewtonInterpolant(ns.nodes(), res[i]).monomial();
  const PolyMap c(std::move(corr));
  return {p + c, maxres, disc_size(c)};
}

Correction peaked_lagrange_correct(const PolyMap& p, const NodeSet& ns, std::size_t peak, int power) {
  check_dims(p, ns);
  if (peak >= ns.size()) throw ConfigError("peaked_lagrange_correct: peak index out of range");
  if (power < 0) throw ConfigError("peaked_lagrange_correct: negative power");
  const std::size_t m = p.dim();
  const cplx a = ns.nodes()[peak];
  if (a == cplx(0) && power > 0) throw ConfigError("peaked_lagrange_correct: peak node at the origin");

  std::vector<cplx> others;
  std::vector<Point> other_targets;
  for (std::size_t j = 0; j < ns.size(); ++j)
    if (j != peak) {
      others.push_back(ns.nodes()[j]);
      other_targets.push_back(ns.targets()[j]);
    }

  // plain correction on the other nodes first
  Correction base = lagrange_correct(p, NodeSet(others, other_targets));
  double maxres = base.max_residual;
  const Point at_peak = base.poly(a);
  maxres = std::max(maxres, distance(p(a), ns.targets()[peak]));

  // w(z) = (z/a)^power * prod (z - a_j)/(a - a_j), w(a) = 1, w(a_j) = 0
  std::vector<cplx> w{1};
  cplx scale = std::pow(a, -power);
  for (const auto& x : others) {
    std::vector<cplx> next(w.size() + 1, 0);
    for (std::size_t i = 0; i < w.size(); ++i) {
      next[i + 1] += w[i];
      next[i] -= w[i] * x;
    }
    w = std::move(next);
    scale /= (a - x);
  }
  std::vector<std::vector<cplx>> corr(m);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx r = ns.targets()[peak][i] - at_peak[i];
    corr[i].assign(static_cast<std::size_t>(power), 0);
    for (const auto& x : w) corr[i].push_back(x * scale * r);
  }
  const PolyMap c(std::move(corr));
  const PolyMap total = base.poly + c;
  return {total, maxres, disc_size(total - p)};
}

}  // namespace densedisc
