#include "densedisc/mergelyan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace densedisc {

SegmentPath SegmentPath::straight(Point from, Point to) {
  if (from.size() != to.size()) throw ConfigError("path endpoints differ in dimension");
  SegmentPath p;
  p.from_ = std::move(from);
  p.to_ = std::move(to);
  return p;
}

SegmentPath SegmentPath::jet(std::vector<Point> taylor, Point to) {
  if (taylor.empty()) throw ConfigError("jet path needs at least the junction value");
  for (const auto& c : taylor)
    if (c.size() != to.size()) throw ConfigError("jet path coefficients differ in dimension");
  SegmentPath p;
  p.from_ = taylor[0];
  p.to_ = std::move(to);
  p.taylor_ = std::move(taylor);
  // bend = target - P(2), so that gamma(2) = target
  p.bend_ = p.to_;
  for (const auto& c : p.taylor_)
    for (std::size_t i = 0; i < c.size(); ++i) p.bend_[i] -= c[i];
  return p;
}

Point SegmentPath::operator()(double t) const {
  // endpoints exactly, so that node targets can be compared bitwise
  if (t == 2) return to_;
  if (t == 1) return from_;
  Point out(to_.size());
  if (taylor_.empty()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (2 - t) * from_[i] + (t - 1) * to_[i];
    return out;
  }
  const double u = t - 1;
  const double top = std::pow(u, double(taylor_.size()));
  for (std::size_t i = 0; i < out.size(); ++i) {
    cplx acc = 0;
    for (std::size_t k = taylor_.size(); k-- > 0;) acc = acc * u + taylor_[k][i];
    out[i] = acc + top * bend_[i];
  }
  return out;
}

SegmentPath make_path(const Point& from, const Point& to) { return SegmentPath::straight(from, to); }

std::vector<Point> junction_jet(const PolyMap& f, double lambda, int order) {
  if (order < 0) throw ConfigError("junction_jet: negative order");
  std::vector<Point> out(static_cast<std::size_t>(order) + 1, Point(f.dim(), 0));
  for (std::size_t i = 0; i < f.dim(); ++i) {
    // Taylor shift: coefficients of f(lambda + u) by repeated synthetic division
    std::vector<cplx> b = f.coord(i);
    const std::size_t d = b.size() - 1;
    double scale = 1;  // lambda^k turns powers of u into powers of (z - 1)
    for (std::size_t k = 0; k <= static_cast<std::size_t>(order); ++k) {
      if (k <= d) {
        for (std::size_t j = d; j-- > k;) b[j] += lambda * b[j + 1];
        out[k][i] = b[k] * scale;
      }
      scale *= lambda;
    }
  }
  return out;
}

StageData StageData::make(const PolyMap& f, double lambda, const Point& target, int jet_order) {
  if (!(lambda > 0 && lambda < 1)) throw ConfigError("StageData: lambda must lie in (0, 1)");
  if (target.size() != f.dim()) throw ConfigError("StageData: target dimension mismatch");
  if (jet_order < 0) return StageData{f, lambda, SegmentPath::straight(f(cplx(lambda, 0)), target)};
  auto jet = junction_jet(f, lambda, jet_order);
  jet[0] = f(cplx(lambda, 0));  // the junction value exactly as the disc part produces it
  return StageData{f, lambda, SegmentPath::jet(std::move(jet), target)};
}

Point StageData::operator()(cplx z) const {
  if (std::abs(z) <= 1) return disc_part(lambda * z);
  return path(z.real());
}

bool in_K(cplx z, double tol) {
  if (std::abs(z) <= 1 + tol) return true;
  return std::abs(z.imag()) <= tol && z.real() >= 1 - tol && z.real() <= 2 + tol;
}

Point KPolynomial::operator()(cplx z) const {
  const std::size_t n = coef_.empty() ? 0 : coef_[0].size();
  std::vector<cplx> q(n);
  Point out(coef_.size(), 0);
  if (n > 0) q[0] = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    cplx v = z * q[k];
    for (std::size_t j = 0; j <= k; ++j) v -= hess_[k][j] * q[j];
    q[k + 1] = v / hess_[k][k + 1];
  }
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    cplx acc = 0;
    for (std::size_t k = 0; k < n; ++k) acc += coef_[i][k] * q[k];
    out[i] = acc + (corr_.empty() ? cplx(0) : corr_[i](z));
  }
  return out;
}

int KPolynomial::degree() const {
  int d = coef_.empty() ? 0 : static_cast<int>(coef_[0].size()) - 1;
  for (const auto& c : corr_) d = std::max(d, static_cast<int>(c.monomial().size()) - 1);
  return d;
}

PolyMap KPolynomial::to_polymap() const {
  const std::size_t n = coef_.empty() ? 0 : coef_[0].size();
  std::vector<std::vector<cplx>> basis;  // monomial coefficients of q_k
  if (n > 0) basis.push_back({1});
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::vector<cplx> v(k + 2, 0);
    for (std::size_t j = 0; j < basis[k].size(); ++j) v[j + 1] += basis[k][j];
    for (std::size_t j = 0; j <= k; ++j)
      for (std::size_t t = 0; t < basis[j].size(); ++t) v[t] -= hess_[k][j] * basis[j][t];
    for (auto& x : v) x /= hess_[k][k + 1];
    basis.push_back(std::move(v));
  }
  std::vector<std::vector<cplx>> out(coef_.size());
  for (std::size_t i = 0; i < coef_.size(); ++i) {
    out[i].assign(std::max<std::size_t>(n, 1), 0);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t t = 0; t < basis[k].size(); ++t) out[i][t] += coef_[i][k] * basis[k][t];
    if (!corr_.empty()) {
      const auto c = corr_[i].monomial();
      if (c.size() > out[i].size()) out[i].resize(c.size(), 0);
      for (std::size_t t = 0; t < c.size(); ++t) out[i][t] += c[t];
    }
  }
  return PolyMap(std::move(out));
}

namespace {

// Values of the Arnoldi basis on a point set that does not take part in the
// orthogonalization; extended column by column with the same recurrence.
struct Track {
  std::vector<cplx> z;
  std::vector<std::vector<cplx>> q;
  std::vector<std::vector<cplx>> g;  // current approximant, per coordinate

  Track(std::vector<cplx> pts, std::size_t m) : z(std::move(pts)) {
    q.push_back(std::vector<cplx>(z.size(), 1.0));
    g.assign(m, std::vector<cplx>(z.size(), 0));
  }
  void extend(const std::vector<cplx>& h) {
    const std::size_t k = q.size() - 1;
    std::vector<cplx> v(z.size());
    for (std::size_t p = 0; p < z.size(); ++p) {
      cplx acc = z[p] * q[k][p];
      for (std::size_t j = 0; j <= k; ++j) acc -= h[j] * q[j][p];
      v[p] = acc / h[k + 1];
    }
    q.push_back(std::move(v));
  }
  void add(std::size_t i, cplx c) {
    const auto& last = q.back();
    for (std::size_t p = 0; p < z.size(); ++p) g[i][p] += c * last[p];
  }
};

// Weighted discrete inner product; the weights sum to one.
cplx dot(const std::vector<cplx>& a, const std::vector<cplx>& b, const std::vector<double>& w) {
  cplx s = 0;
  for (std::size_t p = 0; p < a.size(); ++p) s += w[p] * std::conj(a[p]) * b[p];
  return s;
}

}  // namespace

struct KFitter {
  static ApproxResult run(const ApproxRequest& req);
};

ApproxResult KFitter::run(const ApproxRequest& req) {
  const StageData& data = req.data;
  const std::size_t m = data.dim();
  const NodeSet& ns = req.interp;
  if (!(req.err_target > 0)) throw ConfigError("approximate_on_K: error target must be positive");
  if (req.max_degree < 1) throw ConfigError("approximate_on_K: max_degree must be positive");
  if (data.path.dim() != m) throw ConfigError("approximate_on_K: path dimension mismatch");
  bool has_two = false;
  for (std::size_t j = 0; j < ns.size(); ++j) {
    const cplx a = ns.nodes()[j];
    if (!in_K(a)) throw ConfigError("approximate_on_K: interpolation node outside K");
    if (ns.targets()[j].size() != m) throw ConfigError("approximate_on_K: target dimension mismatch");
    if (a == cplx(2, 0)) {
      has_two = true;
      if (distance(ns.targets()[j], data.path.end()) > 0)
        throw ConfigError("approximate_on_K: target at 2 differs from the path end");
    }
  }
  if (!has_two) throw ConfigError("approximate_on_K: node 2 is required");
  if (ns.size() > 1 && ns.min_separation() < 1e-4)
    throw ConfigError("approximate_on_K: interpolation nodes closer than 1e-4");

  const double pi = std::numbers::pi;
  const std::size_t density = static_cast<std::size_t>(std::max(1, req.fit_density));
  const std::size_t nd = static_cast<std::size_t>(req.max_degree);
  const std::size_t nc = density * std::max<std::size_t>(256, 4 * nd + 4);
  const std::size_t nsg = density * std::max<std::size_t>(128, 2 * nd + 2);

  std::vector<cplx> fit, val;
  for (std::size_t j = 0; j < nc; ++j) fit.push_back(std::polar(1.0, 2 * pi * double(j) / double(nc)));
  for (std::size_t j = 0; j < nsg; ++j)
    fit.push_back(1.5 + 0.5 * std::cos(pi * (double(j) + 0.5) / double(nsg)));
  const std::size_t vc = 2 * nc, vs = 2 * nsg + 1;
  for (std::size_t j = 0; j < vc; ++j) val.push_back(std::polar(1.0, 2 * pi * (double(j) + 0.5) / double(vc)));
  for (std::size_t j = 0; j < vs; ++j) val.push_back(1.5 + 0.5 * std::cos(pi * double(j) / double(vs - 1)));

  // The interpolation nodes join the fit with the weight of all other
  // samples together, so the fit nearly interpolates and the exact
  // correction afterwards stays small instead of shifting all of K.
  const std::size_t plain = fit.size();
  for (const cplx a : ns.nodes()) fit.push_back(a);
  const std::size_t N = fit.size();
  std::vector<double> w(N, 1.0 / (double(plain) * (1.0 + double(ns.size()))));
  for (std::size_t p = plain; p < N; ++p) w[p] = 1.0 / (1.0 + double(ns.size()));
  std::vector<std::vector<cplx>> resid(m, std::vector<cplx>(N));
  for (std::size_t p = 0; p < N; ++p) {
    const Point v = data(fit[p]);
    for (std::size_t i = 0; i < m; ++i) resid[i][p] = v[i];
  }
  std::vector<Point> fval;
  for (const auto& z : val) fval.push_back(data(z));

  std::vector<std::vector<cplx>> Q{std::vector<cplx>(N, 1.0)};
  Track tv(val, m), tx(ns.nodes(), m);
  KPolynomial g;
  g.coef_.assign(m, {});

  auto project = [&]() {
    const auto& q = Q.back();
    for (std::size_t i = 0; i < m; ++i) {
      const cplx c = dot(q, resid[i], w);
      for (std::size_t p = 0; p < N; ++p) resid[i][p] -= c * q[p];
      g.coef_[i].push_back(c);
      tv.add(i, c);
      tx.add(i, c);
    }
  };
  project();

  double best = INFINITY;
  int best_deg = 0;
  for (std::size_t n = 0;; ++n) {
    double fit_err = 0;
    for (std::size_t p = 0; p < N; ++p) {
      double s = 0;
      for (std::size_t i = 0; i < m; ++i) s += std::norm(resid[i][p]);
      fit_err = std::max(fit_err, s);
    }
    fit_err = std::sqrt(fit_err);
    if (fit_err <= req.err_target / 2 || n == nd) {
      std::vector<NewtonInterpolant> corr;
      for (std::size_t i = 0; i < m; ++i) {
        std::vector<cplx> r(ns.size());
        for (std::size_t j = 0; j < ns.size(); ++j) r[j] = ns.targets()[j][i] - tx.g[i][j];
        corr.emplace_back(ns.nodes(), r);
      }
      double err = 0, cnorm = 0;
      for (std::size_t p = 0; p < val.size(); ++p) {
        double s = 0, c2 = 0;
        for (std::size_t i = 0; i < m; ++i) {
          const cplx c = corr[i](val[p]);
          s += std::norm(tv.g[i][p] + c - fval[p][i]);
          c2 += std::norm(c);
        }
        err = std::max(err, s);
        cnorm = std::max(cnorm, c2);
      }
      err = std::sqrt(err);
      if (err < best) {
        best = err;
        best_deg = static_cast<int>(n);
      }
      if (err <= req.err_target) {
        g.corr_ = std::move(corr);
        ApproxResult out;
        out.g = std::move(g);
        out.error = err;
        out.fit_error = fit_err;
        out.correction_norm = std::sqrt(cnorm);
        out.degree = out.g.degree();
        return out;
      }
    }
    if (n == nd) break;

    // next Arnoldi vector: z q_n orthogonalized twice against q_0..q_n
    std::vector<cplx> v(N);
    for (std::size_t p = 0; p < N; ++p) v[p] = fit[p] * Q[n][p];
    std::vector<cplx> h(n + 2, 0);
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j <= n; ++j) {
        const cplx c = dot(Q[j], v, w);
        h[j] += c;
        for (std::size_t p = 0; p < N; ++p) v[p] -= c * Q[j][p];
      }
    h[n + 1] = std::sqrt(dot(v, v, w).real());
    if (!(h[n + 1].real() > 1e-14)) break;
    for (auto& x : v) x /= h[n + 1];
    Q.push_back(std::move(v));
    g.hess_.push_back(h);
    tv.extend(h);
    tx.extend(h);
    project();
  }
  throw ApproxFailure("approximate_on_K: error target not reached", best, best_deg);
}

ApproxResult approximate_on_K(const ApproxRequest& req) { return KFitter::run(req); }

}  // namespace densedisc
