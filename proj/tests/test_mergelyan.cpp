#include <doctest.h>

#include <cmath>
#include <random>

#include "densedisc/errors.hpp"
#include "densedisc/mergelyan.hpp"

using namespace densedisc;

namespace {

PolyMap truncated_exp(int deg) {
  std::vector<cplx> c;
  double fact = 1;
  for (int k = 0; k <= deg; ++k) {
    if (k > 0) fact *= k;
    c.emplace_back(1.0 / fact);
  }
  return PolyMap({c});
}

ApproxRequest exp_request(double err, int jet_order) {
  const StageData data = StageData::make(truncated_exp(20), 0.8, {1.0}, jet_order);
  return ApproxRequest{data, err, NodeSet({2.0}, {{1.0}}), 300};
}

// fresh points of K, drawn independently of the fit and validation grids
std::vector<cplx> random_K(std::size_t count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<cplx> out;
  while (out.size() < count) {
    const double pick = u(rng);
    if (pick < 0.4)
      out.push_back(std::polar(1.0, 2 * M_PI * u(rng)));
    else if (pick < 0.7)
      out.push_back(1 + u(rng));
    else
      out.push_back(std::polar(std::sqrt(u(rng)), 2 * M_PI * u(rng)));
  }
  return out;
}

}  // namespace

TEST_CASE("straight path examples") {
  const SegmentPath p = make_path({1.0}, {3.0});
  CHECK(p(1.5)[0] == cplx(2.0));
  CHECK(p(1.0)[0] == cplx(1.0));
  CHECK(p(2.0)[0] == cplx(3.0));
  CHECK(p.is_straight());
  CHECK_THROWS_AS(make_path({1.0}, {1.0, 2.0}), ConfigError);
}

TEST_CASE("jet path is continuous at both ends") {
  const PolyMap f({{0.1, cplx(0.3, 0.2), -0.5, cplx(0, 0.25)}, {1.0, 2.0}});
  const Point s{cplx(0.7, -0.2), cplx(-1, 1)};
  const StageData d = StageData::make(f, 0.75, s, 5);
  CHECK_FALSE(d.path.is_straight());
  CHECK(distance(d.path(1.0), f(0.75)) < 1e-14);
  CHECK(distance(d.path(2.0), s) < 1e-14);
  CHECK(distance(d(2.0), s) < 1e-14);
  CHECK(distance(d(cplx(0, 1)), f(cplx(0, 0.75))) < 1e-14);
  CHECK_THROWS_AS(StageData::make(f, 1.0, s, 5), ConfigError);
}

TEST_CASE("junction jet matches directly computed derivatives") {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  for (int t = 0; t < 20; ++t) {
    std::vector<cplx> a;
    for (int k = 0; k <= 12; ++k) a.emplace_back(g(rng), g(rng));
    const PolyMap f({a});
    const double lambda = 0.5 + 0.4 * (t / 19.0);
    const auto jet = junction_jet(f, lambda, 6);
    REQUIRE(jet.size() == 7);
    // d^j/dz^j f(lambda z) at z = 1, divided by j!: sum_k a_k C(k, j) lambda^k
    for (int j = 0; j <= 6; ++j) {
      cplx want = 0;
      for (int k = j; k <= 12; ++k) want += a[k] * std::tgamma(k + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(k - j + 1.0)) * std::pow(lambda, k);
      CHECK(std::abs(jet[j][0] - want) < 1e-10 * (1 + std::abs(want)));
    }
  }
}

TEST_CASE("K membership") {
  CHECK(in_K(0.5));
  CHECK(in_K(cplx(0, 1)));
  CHECK(in_K(1.7));
  CHECK_FALSE(in_K(cplx(1.5, 0.01)));
  CHECK_FALSE(in_K(2.1));
  CHECK_FALSE(in_K(cplx(0, 1.01)));
}

TEST_CASE("error ladder for the truncated exponential") {
  double prev = INFINITY;
  for (int k = 1; k <= 10; ++k) {
    const double err = std::ldexp(1.0, -k);
    const ApproxResult r = approximate_on_K(exp_request(err, 5));
    CHECK(r.error <= err);
    CHECK(r.error <= prev);
    CHECK(std::abs(r.g(2.0)[0] - 1.0) < 1e-9);
    prev = r.error;
  }
}

TEST_CASE("error holds on fresh samples against a finer reference") {
  const ApproxResult coarse = approximate_on_K(exp_request(std::ldexp(1.0, -8), 5));
  const ApproxResult fine = approximate_on_K(exp_request(std::ldexp(1.0, -12), 5));
  const StageData data = exp_request(1, 5).data;
  double to_ref = 0, to_data = 0;
  for (const cplx z : random_K(10000, 42)) {
    to_ref = std::max(to_ref, distance(coarse.g(z), fine.g(z)));
    to_data = std::max(to_data, distance(coarse.g(z), data(z)));
  }
  CHECK(to_data <= std::ldexp(1.0, -8));
  CHECK(to_ref <= std::ldexp(1.0, -8) + std::ldexp(1.0, -12));
}

TEST_CASE("denser fitting gives a consistent answer") {
  ApproxRequest a = exp_request(std::ldexp(1.0, -10), 5);
  ApproxRequest b = a;
  b.fit_density = 2;
  const ApproxResult ra = approximate_on_K(a), rb = approximate_on_K(b);
  double diff = 0;
  for (const cplx z : random_K(2000, 43)) diff = std::max(diff, distance(ra.g(z), rb.g(z)));
  CHECK(diff <= 2 * std::ldexp(1.0, -10));
  CHECK(std::abs(ra.degree - rb.degree) <= 4);
}

TEST_CASE("the straight path stalls") {
  ApproxRequest req = exp_request(std::ldexp(1.0, -12), -1);
  req.max_degree = 120;
  try {
    approximate_on_K(req);
    FAIL("expected ApproxFailure");
  } catch (const ApproxFailure& e) {
    CHECK(e.best() > std::ldexp(1.0, -12));
    CHECK(e.best_degree() <= 120);
  }
}

TEST_CASE("interpolation nodes are honoured") {
  const StageData data = StageData::make(truncated_exp(20), 0.8, {1.0}, 5);
  const std::vector<cplx> nodes{0.0, cplx(0.3, 0.4), 1.5, 2.0};
  std::vector<Point> targets;
  for (const cplx a : nodes) targets.push_back(data(a));
  const ApproxResult r = approximate_on_K({data, 1e-3, NodeSet(nodes, targets)});
  for (std::size_t j = 0; j < nodes.size(); ++j) CHECK(distance(r.g(nodes[j]), targets[j]) < 1e-9);
  CHECK(r.error <= 1e-3);
}

TEST_CASE("bad requests") {
  const StageData data = StageData::make(truncated_exp(5), 0.8, {1.0}, 5);
  CHECK_THROWS_AS(approximate_on_K({data, 1e-3, NodeSet({cplx(0, 1.5), 2.0}, {{0.0}, {1.0}})}), ConfigError);
  CHECK_THROWS_AS(approximate_on_K({data, 1e-3, NodeSet({0.5}, {{0.0}})}), ConfigError);
  CHECK_THROWS_AS(approximate_on_K({data, 1e-3, NodeSet({2.0}, {{0.0}})}), ConfigError);
  CHECK_THROWS_AS(approximate_on_K({data, 1e-3, NodeSet({0.5, 0.50001, 2.0}, {{0.0}, {0.0}, {1.0}})}),
                  ConfigError);
  CHECK_THROWS_AS(approximate_on_K({data, 0, NodeSet({2.0}, {{1.0}})}), ConfigError);
}

TEST_CASE("monomial conversion agrees at moderate degree") {
  const ApproxResult r = approximate_on_K(exp_request(std::ldexp(1.0, -6), 5));
  const PolyMap p = r.g.to_polymap();
  CHECK(p.degree() <= r.g.degree() + 1);
  for (const cplx z : random_K(500, 44)) CHECK(distance(p(z), r.g(z)) < 1e-6);
}

TEST_CASE("zero data gives a near-zero polynomial") {
  const StageData data = StageData::make(PolyMap::zero(1), 0.5, {0.0}, 5);
  const ApproxResult r = approximate_on_K({data, 1e-3, NodeSet({2.0}, {{0.0}})});
  CHECK(r.error <= 1e-3);
  CHECK(r.g(2.0)[0] == cplx(0));
}

TEST_CASE("identity data bent to a far target") {
  const StageData data = StageData::make(PolyMap({{cplx(0), cplx(1)}}), 0.9, {2.0}, 5);
  const ApproxResult r = approximate_on_K({data, 1e-3, NodeSet({2.0}, {{2.0}})});
  CHECK(std::abs(r.g(2.0)[0] - 2.0) < 1e-12);
  for (int j = 0; j < 360; ++j) {
    const cplx z = std::polar(1.0, 2 * M_PI * j / 360);
    CHECK(std::abs(r.g(z)[0] - 0.9 * z) <= 1e-3);
  }
}

TEST_CASE("doubling the fit samples changes the error by less than a factor 2") {
  for (int k : {4, 8, 10}) {
    ApproxRequest a = exp_request(std::ldexp(1.0, -k), 5);
    ApproxRequest b = a;
    b.fit_density = 2;
    const double ea = approximate_on_K(a).error, eb = approximate_on_K(b).error;
    CHECK(eb < 2 * ea);
    CHECK(ea < 2 * eb);
  }
}

TEST_CASE("the junction value matches the disc data exactly") {
  const PolyMap f({{0.2, cplx(0.1, -0.3), 0.05}});
  for (int order : {-1, 0, 3, 5}) {
    const StageData d = StageData::make(f, 0.7, {cplx(1, 1)}, order);
    CHECK(d.path(1.0) == d.junction());
  }
}
