#include "densedisc/driver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

#include "densedisc/conformal.hpp"
#include "densedisc/errors.hpp"
#include "densedisc/hypgeo.hpp"
#include "densedisc/mergelyan.hpp"

namespace densedisc {

const char* route_name(Route r) {
  switch (r) {
    case Route::attained: return "attained";
    case Route::finger: return "finger";
    case Route::direct: return "direct";
  }
  return "?";
}

Route route_from_name(const std::string& s) {
  if (s == "attained") return Route::attained;
  if (s == "finger") return Route::finger;
  if (s == "direct") return Route::direct;
  throw ConfigError("unknown route '" + s + "'");
}

void RunConfig::validate() const {
  if (m < 1) throw ConfigError("m must be at least 1");
  if (seed_map.dim() != m) throw ConfigError("seed map dimension differs from m");
  if (!(epsilon > 0) || !std::isfinite(epsilon)) throw ConfigError("epsilon must be positive");
  if (!(r > 0 && r < 1)) throw ConfigError("r must lie in (0, 1)");
  if (stages < 1) throw ConfigError("stages must be at least 1");
  if (box.size() != m) throw ConfigError("dense set box dimension differs from m");
  if (degree_cap < 1) throw ConfigError("degree_cap must be at least 1");
  if (seed_map.degree() > degree_cap) throw ConfigError("seed map degree exceeds degree_cap");
  if (routes.empty()) throw ConfigError("no routes configured");
  if (!(tol.interp_residual > 0) || !(tol.sup_eta > 0) || !(tol.gap_margin > 0 && tol.gap_margin <= 1) ||
      !(tol.node_separation > 0) || !(tol.finger_min_delta > 0) || tol.retry_budget < 1 ||
      tol.zipper_resolution < 64 || tol.approx_max_degree < 1 || tol.taylor_max_degree < 1)
    throw ConfigError("tolerances out of range");
  DenseEnumeration probe(box, level_cap);
  if (level_cap >= 0 && DenseEnumeration::count_through_level(m, level_cap) < std::uint64_t(stages))
    throw ConfigError("dense set level cap yields fewer points than stages");
}

std::vector<Point> RunConfig::targets() const {
  DenseEnumeration e(box, level_cap);
  std::vector<Point> out;
  for (int i = 0; i < stages; ++i) out.push_back(e.next());
  return out;
}

namespace {

constexpr double pi = std::numbers::pi;

struct Candidate {
  PolyMap f;
  std::vector<cplx> nodes;  // a_{j,n+1} including the new one (last)
  double lambda = 1;
  int k = 0;
  double err = 0;
  double delta = 0;
  int trials = 1;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Point of modulus `radius` at one of 64 fixed angles, farthest from the given nodes.
cplx place_node(const std::vector<cplx>& nodes, double radius) {
  cplx best = std::polar(radius, pi / 64);
  double score = -1;
  for (int i = 0; i < 64; ++i) {
    const cplx a = std::polar(radius, 2 * pi * (i + 0.5) / 64);
    double s = INFINITY;
    for (const auto& b : nodes) s = std::min(s, std::abs(a - b));
    if (s > score) {
      score = s;
      best = a;
    }
  }
  return best;
}

NodeSet node_set(const std::vector<cplx>& nodes, const std::vector<Point>& targets) {
  return NodeSet(nodes, targets);
}

double next_radius(double r_n, const std::vector<cplx>& nodes) {
  double ma = 0;
  for (const auto& a : nodes) ma = std::max(ma, std::abs(a));
  // strictly above both (1 + r_n)/2 and every node modulus
  const double lo = std::max(0.5 * (1 + r_n), ma);
  return lo + 0.1 * (1 - lo);
}

// Certificate for a candidate; returns the list of violated conditions.
std::vector<std::string> certify(const StageState& st, const Point& s, const Candidate& c,
                                 const RunConfig& cfg, Route route, StageCertificate& cert) {
  std::vector<std::string> bad;
  const int n = st.n;
  cert = StageCertificate{};
  cert.n = n;
  cert.route = route;
  cert.lambda = c.lambda;
  cert.k = c.k;
  cert.err = c.err;
  cert.delta = c.delta;
  cert.trials = c.trials;
  cert.r_n = st.r;
  cert.nodes = c.nodes;
  cert.new_node = c.nodes.back();
  cert.target = s;
  cert.degree = c.f.degree();
  cert.gap_bound = std::ldexp(cfg.epsilon, -(n + 1));
  cert.r_next = next_radius(st.r, c.nodes);

  bool inside = true;
  for (const auto& a : c.nodes) inside = inside && std::abs(a) < 1;
  if (!inside || !(cert.r_next < 1) || !(cert.r_next > 0.5 * (1 + st.r))) bad.push_back("(2) radius/nodes");
  if (cert.degree > cfg.degree_cap) bad.push_back("degree " + std::to_string(cert.degree) + " > cap");

  cert.sup_gap = sup_norm(c.f, st.f, st.r, {cfg.tol.sup_eta});
  if (!(cert.sup_gap < cert.gap_bound)) bad.push_back("(4) gap " + fmt(cert.sup_gap) + " >= " + fmt(cert.gap_bound));

  for (std::size_t j = 0; j < c.nodes.size(); ++j) {
    const Point& t = j < st.targets.size() ? st.targets[j] : s;
    cert.residuals.push_back(distance(c.f(c.nodes[j]), t));
    if (!(cert.residuals.back() < cfg.tol.interp_residual)) {
      bad.push_back("(3) residual " + fmt(cert.residuals.back()) + " at node " + std::to_string(j + 1));
      break;
    }
  }
  if (inside) {
    for (std::size_t j = 0; j < st.nodes.size(); ++j) {
      const double d = poincare_distance(st.nodes[j], c.nodes[j]);
      cert.drifts.push_back(d);
      if (!(d < std::ldexp(1.0, -n))) {
        bad.push_back("(5) drift " + fmt(d) + " at node " + std::to_string(j + 1));
        break;
      }
    }
  }
  for (std::size_t j = 0; j < c.nodes.size(); ++j)
    for (std::size_t i = 0; i < j; ++i)
      if (std::abs(c.nodes[i] - c.nodes[j]) < cfg.tol.node_separation) {
        bad.push_back("node separation");
        i = j = c.nodes.size();
        break;
      }
  return bad;
}

std::optional<Candidate> attained_route(const StageState& st, const Point& s, const RunConfig& cfg,
                                        std::string& why) {
  const PolyMap& f = st.f;
  std::vector<cplx> found;
  if (f.degree() == 0) {
    if (distance(f(0), s) <= 0.1 * cfg.tol.interp_residual) found.push_back(place_node(st.nodes, 0.5 * st.r));
  } else {
    std::size_t c = 0;
    for (std::size_t i = 0; i < f.dim(); ++i)
      if (f.coord(i).size() > f.coord(c).size()) c = i;
    std::vector<cplx> poly = f.coord(c);
    poly[0] -= s[c];
    std::vector<cplx> dpoly;
    for (std::size_t k = 1; k < poly.size(); ++k) dpoly.push_back(double(k) * poly[k]);
    for (cplx a : polynomial_roots(poly)) {
      for (int it = 0; it < 3; ++it) {
        const cplx d = horner(dpoly, a);
        if (d == cplx(0)) break;
        a -= horner(poly, a) / d;
      }
      if (!(std::abs(a) < 1 - 1e-9)) continue;
      if (!(distance(f(a), s) <= 0.01 * cfg.tol.interp_residual)) continue;
      bool sep = true;
      for (const auto& b : st.nodes) sep = sep && std::abs(a - b) >= cfg.tol.node_separation;
      if (sep) found.push_back(a);
    }
  }
  if (found.empty()) {
    why = "attained: no preimage of the target in the disc";
    return std::nullopt;
  }
  const cplx a = *std::min_element(found.begin(), found.end(), [](cplx x, cplx y) {
    return std::abs(x) < std::abs(y) || (std::abs(x) == std::abs(y) && std::arg(x) < std::arg(y));
  });
  Candidate cand{f, st.nodes};
  cand.nodes.push_back(a);
  cand.k = st.n + 1;
  auto targets = st.targets;
  targets.push_back(s);
  const Correction corr = lagrange_correct(f, node_set(cand.nodes, targets));
  if (corr.max_residual > 1e-13) cand.f = corr.poly;
  return cand;
}

std::optional<Candidate> direct_route(const StageState& st, const Point& s, const RunConfig& cfg,
                                      std::string& why) {
  const double rn = st.r;
  auto targets = st.targets;
  targets.push_back(s);
  const double budget = cfg.tol.gap_margin * std::ldexp(cfg.epsilon, -(st.n + 1));

  // Candidate nodes on a few rings outside Delta_{r_n}, 64 angles each. The
  // peak power needed is about log(lead / budget) / log(|a| / r_n) with lead
  // bounding the correction on |z| = r_n; try the cheapest first.
  struct Site {
    int power;
    double lead;
    cplx a;
  };
  std::vector<Site> sites;
  for (double frac : {0.06, 0.12, 0.25, 0.45, 0.6}) {
    const double ra = rn + frac * (1 - rn);
    for (int i = 0; i < 64; ++i) {
      const cplx a = std::polar(ra, 2 * pi * (i + 0.5) / 64);
      bool sep = true;
      for (const auto& b : st.nodes) sep = sep && std::abs(a - b) >= 0.25 * (1 - rn);
      if (!sep) continue;
      double lead = distance(st.f(a), s);
      for (const auto& b : st.nodes) lead *= (rn + std::abs(b)) / std::abs(a - b);
      const int P = lead > 0.5 * budget
                        ? static_cast<int>(std::ceil(std::log(lead / (0.5 * budget)) / std::log(ra / rn)))
                        : 0;
      sites.push_back({P, lead, a});
    }
  }
  std::stable_sort(sites.begin(), sites.end(), [](const Site& x, const Site& y) {
    return x.power < y.power || (x.power == y.power && x.lead < y.lead);
  });

  std::string last = "direct: no admissible node site";
  int trials = 0;
  for (const Site& site : sites) {
    if (++trials > 8) break;
    auto nodes = st.nodes;
    nodes.push_back(site.a);
    const NodeSet ns = node_set(nodes, targets);
    int P = site.power;
    std::optional<PolyMap> found;
    for (int guard = 0; guard < 64; ++guard) {
      if (P + int(st.nodes.size()) > cfg.degree_cap) {
        last = "direct: peak power " + std::to_string(P) + " exceeds degree cap";
        break;
      }
      const Correction corr = peaked_lagrange_correct(st.f, ns, nodes.size() - 1, P);
      if (sup_norm(corr.poly, st.f, rn, {cfg.tol.sup_eta}) < budget) {
        found = corr.poly;
        break;
      }
      P += std::max(1, P / 4);
    }
    if (!found) {
      if (last.rfind("direct: peak", 0) != 0) last = "direct: correction did not fit the gap budget";
      continue;
    }
    double worst = 0;
    for (std::size_t j = 0; j < nodes.size(); ++j) worst = std::max(worst, distance((*found)(nodes[j]), targets[j]));
    if (!(worst < 0.1 * cfg.tol.interp_residual)) {
      last = "direct: residual " + fmt(worst) + " at node " + fmt(site.a.real()) + "+" + fmt(site.a.imag()) + "i";
      continue;
    }
    Candidate cand{*found, nodes};
    cand.k = st.n + 1;
    cand.trials = trials;
    return cand;
  }
  why = last;
  return std::nullopt;
}

std::optional<Candidate> finger_route(const StageState& st, const Point& s, const RunConfig& cfg,
                                      std::vector<std::string>& log) {
  const int n = st.n;
  const double bound = std::ldexp(cfg.epsilon, -(n + 1));
  double base = st.r;
  for (const auto& a : st.nodes) base = std::max(base, std::abs(a));
  for (int t = 1; t <= cfg.tol.retry_budget; ++t) {
    const double lambda = 1 - (1 - base) * std::ldexp(1.0, -t);
    const int k = n + t;
    const double err = std::ldexp(1.0, -k);
    const double delta = std::min(0.3, err);
    std::string tag = "finger t=" + std::to_string(t) + " (lambda=" + fmt(lambda) + ", k=" +
                      std::to_string(k) + ", delta=" + fmt(delta) + "): ";
    if (delta < cfg.tol.finger_min_delta) {
      log.push_back(tag + "finger width below the representable floor " + fmt(cfg.tol.finger_min_delta));
      return std::nullopt;
    }
    try {
      const StageData data = StageData::make(st.f, lambda, s, cfg.tol.jet_order);
      std::vector<cplx> knodes;
      std::vector<Point> ktargets = st.targets;
      for (const auto& a : st.nodes) knodes.push_back(a / lambda);
      knodes.push_back(2);
      ktargets.push_back(s);
      ApproxRequest req{data, err, NodeSet(knodes, ktargets), cfg.tol.approx_max_degree};
      const ApproxResult g = approximate_on_K(req);

      const ZipperMap phi = riemann_map(build_domain(delta, cfg.tol.zipper_resolution));
      std::vector<cplx> nodes;
      for (const auto& a : knodes) nodes.push_back(preimage(phi, a).value());

      const double r_cand = next_radius(st.r, nodes);
      const double rho = 0.5 * (1 + r_cand);
      const DiscMap h = [&](cplx z) { return g.g(phi.forward(z)); };
      const double tail_bound = std::ldexp(cfg.epsilon, -(n + 2));
      std::optional<TaylorResult> tr;
      for (int D = 32; D <= cfg.tol.taylor_max_degree; D *= 2) {
        tr = taylor_from_samples(h, st.f.dim(), rho, D);
        if (tr->tail(st.r) < tail_bound) break;
      }
      if (!(tr->tail(st.r) < tail_bound)) {
        log.push_back(tag + "Taylor tail " + fmt(tr->tail(st.r)) + " above " + fmt(tail_bound));
        continue;
      }
      const NodeSet ns(nodes, ktargets);
      std::optional<PolyMap> best;
      for (int P = 0; P + tr->degree <= cfg.degree_cap; P = P ? 2 * P : 8) {
        const Correction corr = peaked_lagrange_correct(tr->poly, ns, nodes.size() - 1, P);
        if (sup_norm(corr.poly, st.f, st.r, {cfg.tol.sup_eta}) < bound) {
          best = corr.poly;
          break;
        }
      }
      if (!best) {
        log.push_back(tag + "composed map leaves the gap budget " + fmt(bound));
        continue;
      }
      Candidate cand{*best, nodes, lambda, k, err, delta, t};
      return cand;
    } catch (const std::exception& e) {
      log.push_back(tag + e.what());
    }
  }
  return std::nullopt;
}

}  // namespace

StageOutcome run_stage(const StageState& st, const Point& s, const RunConfig& cfg) {
  if (s.size() != st.f.dim()) throw ConfigError("run_stage: target dimension mismatch");
  if (st.nodes.size() != static_cast<std::size_t>(st.n) || st.targets.size() != st.nodes.size())
    throw ConfigError("run_stage: state has inconsistent node count");
  std::vector<std::string> log;
  for (Route route : cfg.routes) {
    std::optional<Candidate> cand;
    std::vector<std::string> finger_log;
    std::string why;
    switch (route) {
      case Route::attained: cand = attained_route(st, s, cfg, why); break;
      case Route::direct: cand = direct_route(st, s, cfg, why); break;
      case Route::finger:
        cand = finger_route(st, s, cfg, finger_log);
        log.insert(log.end(), finger_log.begin(), finger_log.end());
        break;
    }
    if (!cand) {
      if (!why.empty()) log.push_back(why);
      continue;
    }
    StageCertificate cert;
    const auto bad = certify(st, s, *cand, cfg, route, cert);
    if (!bad.empty()) {
      std::string msg = std::string(route_name(route)) + ": certificate failed:";
      for (const auto& b : bad) msg += " " + b + ";";
      log.push_back(msg);
      continue;
    }
    StageOutcome out{StageState{st.n + 1, cand->f, cert.r_next, cand->nodes, st.targets}, cert};
    out.next.targets.push_back(s);
    return out;
  }
  throw StageFailure("stage " + std::to_string(st.n) + " failed on every route", log);
}

RunResult run(const RunConfig& cfg) {
  cfg.validate();
  const auto targets = cfg.targets();
  RunResult res;
  StageState st{0, cfg.seed_map, cfg.r, {}, {}};
  res.stage_maps.push_back(st.f);
  res.final_map = st.f;
  for (int n = 0; n < cfg.stages; ++n) {
    try {
      StageOutcome o = run_stage(st, targets[static_cast<std::size_t>(n)], cfg);
      res.certificates.push_back(o.cert);
      st = std::move(o.next);
      res.stage_maps.push_back(st.f);
      res.final_map = st.f;
    } catch (const StageFailure& e) {
      throw RunFailure(e.what(), res, e.attempts());
    }
  }
  return res;
}

bool VerificationReport::all_pass() const {
  return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
}

std::vector<CheckItem> VerificationReport::failures() const {
  std::vector<CheckItem> out;
  for (const auto& c : items)
    if (!c.pass) out.push_back(c);
  return out;
}

VerificationReport verify_certificates(const PolyMap& final_map, std::span<const StageCertificate> certs,
                                       const RunConfig& cfg, std::span<const PolyMap> maps) {
  VerificationReport rep;
  auto add = [&](int n, const char* cond, bool ok, const std::string& detail) {
    rep.items.push_back({n, cond, ok, detail});
  };
  const bool have_maps = maps.size() == certs.size() + 1;
  if (!maps.empty() && !have_maps) add(-1, "final", false, "stage map count does not match certificates");

  DenseEnumeration dense(cfg.box, cfg.level_cap);
  double total_gap = 0;
  for (std::size_t i = 0; i < certs.size(); ++i) {
    const StageCertificate& c = certs[i];
    const int n = static_cast<int>(i);
    if (c.n != n) add(n, "(2)", false, "certificate out of order");

    // targets come from the dense enumeration
    const Point expect = dense.next();
    add(n, "targets", c.target.size() == expect.size() && distance(c.target, expect) == 0,
        "target is s_" + std::to_string(n + 1));

    // (2) radii and node positions
    const double r_prev = i == 0 ? cfg.r : certs[i - 1].r_next;
    bool ok2 = c.r_n == r_prev && c.r_next > 0.5 * (1 + c.r_n) && c.r_next < 1 && c.nodes.size() == i + 1 &&
               c.new_node == c.nodes.back();
    for (const auto& a : c.nodes) ok2 = ok2 && std::abs(a) < c.r_next;
    add(n, "(2)", ok2, "r_n=" + fmt(c.r_n) + " r_next=" + fmt(c.r_next));

    // (3) interpolation residuals
    const PolyMap* f_next = have_maps ? &maps[i + 1] : (i + 1 == certs.size() ? &final_map : nullptr);
    if (f_next && c.nodes.size() == i + 1) {
      double worst = 0;
      for (std::size_t j = 0; j <= i; ++j) worst = std::max(worst, distance((*f_next)(c.nodes[j]), certs[j].target));
      add(n, "(3)", worst < cfg.tol.interp_residual, "max residual " + fmt(worst));
    } else {
      double worst = 0;
      for (double v : c.residuals) worst = std::max(worst, v);
      add(n, "(3)", c.residuals.size() == i + 1 && worst < cfg.tol.interp_residual,
          "recorded max residual " + fmt(worst));
    }

    // (4) sup gap on Delta_{r_n}
    const double bound = std::ldexp(cfg.epsilon, -(n + 1));
    double gap = c.sup_gap;
    if (have_maps) {
      gap = sup_norm(maps[i + 1], maps[i], c.r_n, {cfg.tol.sup_eta});
      // the recorded value must be a true sup bound too
      add(n, "(4)", gap < bound && c.sup_gap < bound && gap <= c.sup_gap * (1 + 1e-9) + 1e-300,
          "gap " + fmt(gap) + " bound " + fmt(bound));
    } else {
      add(n, "(4)", gap < bound && c.gap_bound == bound, "recorded gap " + fmt(gap) + " bound " + fmt(bound));
    }
    total_gap += gap;

    // (5) hyperbolic drift of the old nodes
    if (i > 0) {
      const auto& prev = certs[i - 1].nodes;
      bool ok5 = c.drifts.size() == prev.size() && prev.size() + 1 == c.nodes.size();
      double worst = 0;
      for (std::size_t j = 0; ok5 && j < prev.size(); ++j) {
        double d;
        try {
          d = poincare_distance(prev[j], c.nodes[j]);
        } catch (const DomainError&) {
          ok5 = false;
          break;
        }
        worst = std::max(worst, std::max(d, c.drifts[j]));
        ok5 = ok5 && d < std::ldexp(1.0, -n) && c.drifts[j] < std::ldexp(1.0, -n) &&
              std::abs(d - c.drifts[j]) <= 1e-12 + 1e-9 * d;
      }
      add(n, "(5)", ok5, "max drift " + fmt(worst) + " bound " + fmt(std::ldexp(1.0, -n)));
    }
  }

  const int N = static_cast<int>(certs.size());
  const double budget = cfg.epsilon * (1 - std::ldexp(1.0, -N));
  add(-1, "sum", total_gap < budget, "sum of gaps " + fmt(total_gap) + " < " + fmt(budget));
  if (have_maps) {
    add(-1, "final", maps.back() == final_map && maps.front() == cfg.seed_map,
        "stage maps start at the seed and end at the final map");
    const double whole = sup_norm(final_map, cfg.seed_map, cfg.r, {cfg.tol.sup_eta});
    add(-1, "sum", whole < cfg.epsilon, "sup |F - f_0| on Delta_r " + fmt(whole));
  }
  return rep;
}

}  // namespace densedisc
