#include <doctest.h>

#include <cmath>
#include <set>

#include "densedisc/denseset.hpp"
#include "densedisc/errors.hpp"

using namespace densedisc;

TEST_CASE("first point is the center") {
  DenseEnumeration e({CoordBox{-1, 1, -1, 1}});
  CHECK(e.next() == Point{0});
  DenseEnumeration f({CoordBox{0, 4, 2, 3}});
  CHECK(f.next() == Point{cplx(2, 2.5)});
}

TEST_CASE("levels up to one give the 3x3 grid, up to two the 5x5 grid") {
  DenseEnumeration e({CoordBox{}});
  std::set<std::pair<double, double>> got;
  for (int i = 0; i < 9; ++i) {
    const Point p = e.next();
    got.insert({p[0].real(), p[0].imag()});
  }
  std::set<std::pair<double, double>> want;
  for (double x : {-1.0, 0.0, 1.0})
    for (double y : {-1.0, 0.0, 1.0}) want.insert({x, y});
  CHECK(got == want);
  for (int i = 0; i < 16; ++i) {
    const Point p = e.next();
    got.insert({p[0].real(), p[0].imag()});
  }
  CHECK(got.size() == 25);
  for (const auto& [x, y] : got) {
    CHECK(std::fmod(std::abs(x), 0.5) == 0);
    CHECK(std::fmod(std::abs(y), 0.5) == 0);
  }
}

TEST_CASE("ring order within a level") {
  DenseEnumeration e({CoordBox{}});
  e.next();
  // level 1: every point is on the outer ring, so lexicographic order
  CHECK(e.next() == Point{cplx(-1, -1)});
  CHECK(e.next() == Point{cplx(-1, 0)});
  for (int i = 0; i < 6; ++i) e.next();
  // level 2 starts with the inner ring (|x|, |y| <= 1/2)
  for (int i = 0; i < 8; ++i) {
    const Point p = e.next();
    CHECK(std::max(std::abs(p[0].real()), std::abs(p[0].imag())) == 0.5);
  }
}

TEST_CASE("no duplicates in the first 10^4 points") {
  DenseEnumeration e({CoordBox{}});
  std::set<std::pair<double, double>> seen;
  for (int i = 0; i < 10000; ++i) {
    const Point p = e.next();
    CHECK(seen.insert({p[0].real(), p[0].imag()}).second);
  }
}

TEST_CASE("coverage radius") {
  const std::vector<CoordBox> box{CoordBox{}};
  CHECK(coverage_radius(std::vector<Point>{{0}}, box, 0.05) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(coverage_radius(std::vector<Point>{}, box, 0.05), ConfigError);

  DenseEnumeration e(box);
  std::vector<Point> pts;
  for (int i = 0; i < 81; ++i) pts.push_back(e.next());
  CHECK(coverage_radius(pts, box, 0.01) <= std::sqrt(2.0) / 2 + 1e-9);
  pts.resize(9);
  CHECK(coverage_radius(pts, box, 0.01) == doctest::Approx(std::sqrt(2.0) / 2));
}

TEST_CASE("two complex coordinates") {
  const std::vector<CoordBox> box{CoordBox{}, CoordBox{0, 1, 0, 1}};
  DenseEnumeration e(box);
  CHECK(e.next() == Point{0, cplx(0.5, 0.5)});
  std::set<std::vector<double>> seen;
  for (int i = 1; i < 81; ++i) {
    const Point p = e.next();
    CHECK(seen.insert({p[0].real(), p[0].imag(), p[1].real(), p[1].imag()}).second);
  }
  CHECK(DenseEnumeration::count_through_level(2, 1) == 81);
  CHECK(e.level() == 1);
}

TEST_CASE("level cap") {
  DenseEnumeration e({CoordBox{}}, 1);
  for (int i = 0; i < 9; ++i) e.next();
  CHECK_THROWS_AS(e.next(), ConfigError);
  CHECK(DenseEnumeration::count_through_level(1, 2) == 25);
  CHECK_THROWS_AS(DenseEnumeration({CoordBox{1, 1, 0, 1}}), ConfigError);
}
