#include <doctest.h>

#include <cmath>
#include <random>

#include "densedisc/conformal.hpp"
#include "densedisc/errors.hpp"

using namespace densedisc;

namespace {

double distance_to_K(cplx z) {
  const double disc = std::max(0.0, std::abs(z) - 1);
  const double x = std::clamp(z.real(), 1.0, 2.0);
  return std::min(disc, std::abs(z - cplx(x, 0)));
}

std::vector<cplx> K_samples() {
  std::vector<cplx> out;
  for (int j = 0; j < 720; ++j) out.push_back(std::polar(1.0, 2 * M_PI * j / 720));
  for (int j = 0; j <= 200; ++j) out.push_back(1 + j / 200.0);
  for (int j = 0; j < 200; ++j) out.push_back(std::polar(0.5, 2 * M_PI * j / 200));
  return out;
}

const ZipperMap& disc_map() {
  static const ZipperMap m = riemann_map(build_disc_domain(1.25, 256));
  return m;
}

const ZipperMap& finger_map() {
  static const ZipperMap m = riemann_map(build_domain(0.25, 512));
  return m;
}

}  // namespace

TEST_CASE("domain polygon hugs K at distance delta") {
  const DomainSpec d = build_domain(0.01, 1024);
  CHECK(d.vertices().size() >= 1024);
  double worst = 0;
  for (const auto& v : d.vertices()) worst = std::max(worst, std::abs(distance_to_K(v) - 0.01));
  CHECK(worst <= 0.01);  // Hausdorff distance to the delta-offset of K is at most 0.02
  CHECK_THROWS_AS(build_domain(0.6, 256), ConfigError);
  CHECK_THROWS_AS(build_domain(0.1, 32), ConfigError);
}

TEST_CASE("domain contains K with margin delta/2") {
  for (double delta : {0.5, 0.3, 0.125, 1.0 / 64}) {
    const DomainSpec d = build_domain(delta, 512);
    for (const cplx z : K_samples()) {
      CHECK(d.contains(z));
      CHECK(d.boundary_distance(z) >= delta / 2);
    }
  }
}

TEST_CASE("domains are nested as delta decreases") {
  const DomainSpec big = build_domain(0.25, 512);
  const DomainSpec small = build_domain(0.125, 512);
  for (const auto& v : small.vertices()) CHECK(big.contains(v));
}

TEST_CASE("polygon validation") {
  std::vector<cplx> cw;
  for (int k = 0; k < 64; ++k) cw.push_back(std::polar(1.0, -2 * M_PI * k / 64));
  CHECK_THROWS_AS(DomainSpec(cw, 0), ConfigError);
  std::vector<cplx> bow;  // figure eight
  for (int k = 0; k < 64; ++k) {
    const double t = 2 * M_PI * k / 64;
    bow.push_back(cplx(std::sin(t), std::sin(t) * std::cos(t)));
  }
  CHECK_THROWS_AS(DomainSpec(bow, 0), ConfigError);
}

TEST_CASE("disc domain map is a dilation") {
  const ZipperMap& m = disc_map();
  double worst = 0;
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 60; ++j) {
      const cplx z = std::polar(0.9 * i / 29.0, 2 * M_PI * j / 60);
      worst = std::max(worst, std::abs(m.forward(z) - 1.25 * z));
    }
  CHECK(worst < 1e-2);
  CHECK(std::abs(preimage(m, 1.0).value() - 0.8) < 1e-4);
}

TEST_CASE("normalization at the origin") {
  for (const ZipperMap* m : {&disc_map(), &finger_map()}) {
    CHECK(std::abs(m->forward(0)) < 1e-10);
    const double h = 1e-4;
    const cplx d = (m->forward(h) - m->forward(-h)) / (2 * h);
    CHECK(std::abs(std::arg(d)) < 1e-6);
    CHECK(m->derivative_at_zero().real() > 0);
    CHECK(std::abs(m->derivative_at_zero() - d) < 1e-6);
    CHECK(std::abs(preimage(*m, 0).value()) < 1e-10);
  }
}

TEST_CASE("forward and inverse are mutually inverse") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (const ZipperMap* m : {&disc_map(), &finger_map()}) {
    for (int i = 0; i < 200; ++i) {
      const cplx z = std::polar(0.95 * std::sqrt(u(rng)), 2 * M_PI * u(rng));
      CHECK(std::abs(m->inverse(m->forward(z)) - z) < 1e-8);
    }
  }
}

TEST_CASE("Schwarz lemma bound for the inverse") {
  const ZipperMap& m = finger_map();
  for (int i = 1; i <= 30; ++i)
    for (int j = 0; j < 48; ++j) {
      const cplx z = std::polar(0.9 * i / 30.0, 2 * M_PI * j / 48);
      CHECK(std::abs(m.inverse(z)) <= std::abs(z) + 1e-6);
    }
}

TEST_CASE("image of the disc stays in the domain") {
  const ZipperMap& m = finger_map();
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 1000; ++i) {
    const cplx z = std::polar(0.999 * std::sqrt(u(rng)), 2 * M_PI * u(rng));
    CHECK(m.domain()->contains(m.forward(z)));
  }
  CHECK(m.boundary_defect() < 5e-3 * 1.25);
}

TEST_CASE("preimage of points outside the domain") {
  CHECK_THROWS_AS(preimage(finger_map(), 5.0), DomainError);
  CHECK_THROWS_AS(preimage(disc_map(), cplx(0, 1.3)), DomainError);
  const DiscPoint a = preimage(finger_map(), 2.0);
  CHECK(std::abs(a.value()) > 0.99);
  // the domain is symmetric about the real axis up to the polygon discretization
  CHECK(std::abs(a.value().imag()) < 1e-5);
}

TEST_CASE("convergence report") {
  const std::vector<ZipperMap> ids{ZipperMap::identity(), ZipperMap::identity()};
  const auto e = convergence_report(ids, 0.7);
  CHECK(e == std::vector<double>{0, 0});
  CHECK_THROWS_AS(convergence_report(ids, 1.0), ConfigError);
  std::vector<ZipperMap> wrong{riemann_map(build_domain(0.125, 256)), riemann_map(build_domain(0.25, 256))};
  CHECK_THROWS_AS(convergence_report(wrong, 0.7), ConfigError);
}

TEST_CASE("maps approach the identity as the finger thins") {
  std::vector<ZipperMap> maps;
  for (int k = 1; k <= 6; ++k) maps.push_back(riemann_map(build_domain(std::min(0.5, std::ldexp(1.0, -k)), 512)));
  const auto e = convergence_report(maps, 0.7);
  for (std::size_t k = 1; k < e.size(); ++k) CHECK(e[k] <= 1.1 * e[k - 1]);
  CHECK(e.back() < 0.05);
  // for small delta the map is close to the dilation by 1 + delta
  CHECK(e.back() == doctest::Approx(0.7 / 64).epsilon(0.05));
}
