#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "rieszpart/lattice.hpp"

using namespace rieszpart;

TEST_CASE("enumerate: 5(Z+1/2) on [0,25)") {
  AffineLattice L(ExactScalar::rational(1, 5));
  auto pts = L.enumerate(Window::ints(0, 25));
  REQUIRE(pts.size() == 5);
  const Rational want[] = {Rational(5, 2), Rational(15, 2), Rational(25, 2), Rational(35, 2), Rational(45, 2)};
  for (std::size_t i = 0; i < 5; ++i) CHECK(pts[i].second.as_rational() == want[i]);
  CHECK(pts[0].first == 0);
}

TEST_CASE("enumerate: unit lattice") {
  AffineLattice L(Rational(1));
  auto pts = L.enumerate(Window::ints(0, 3));
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].second.as_rational() == Rational(1, 2));
  CHECK(pts[2].second.as_rational() == Rational(5, 2));
}

TEST_CASE("enumerate: sqrt2 (Z+1/2)") {
  AffineLattice L(constants::sqrt2inv());
  auto pts = L.enumerate(Window::ints(0, 10));
  CHECK(pts.size() == 7);
  CHECK(pts[0].second.value() == doctest::Approx(0.70710678118654752L));
  CHECK(pts[1].second.value() == doctest::Approx(2.12132034355964257L));
  CHECK(L.count_in(Window::ints(0, 10)) == count_F(constants::sqrt2inv(), 10));
  CHECK(count_F(constants::sqrt2inv(), 10) == 7);
  CHECK(count_F(ExactScalar::rational(1, 2), 4) == 2);
}

TEST_CASE("window boundaries are half-open and exact") {
  AffineLattice L(Rational(1));
  CHECK(L.count_in(Window(Rational(1, 2), Rational(3, 2))) == 1);   // contains 1/2 only
  CHECK(L.count_in(Window(Rational(1, 2), Rational(5, 2))) == 2);
  AffineLattice Z(Rational(1), Rational(0));
  auto r = Z.index_range(Window::ints(-3, 3));
  CHECK(r == IndexRange{-3, 3});
  CHECK_THROWS_AS(Window::ints(2, 2), std::invalid_argument);
  CHECK_THROWS_AS(AffineLattice(Rational(0)), std::invalid_argument);
}

TEST_CASE("enumerate agrees with a direct scan on random windows") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<std::int64_t> lo(-5000, 5000), len(1, 3000), den(1, 40), num(1, 90);
  for (int i = 0; i < 1000; ++i) {
    Rational a(num(rng), den(rng));
    AffineLattice L(a);
    std::int64_t l = lo(rng), h = l + len(rng);
    Window w = Window::ints(l, h);
    auto pts = L.enumerate(w);
    CHECK(static_cast<std::int64_t>(pts.size()) == L.count_in(w));
    // oracle: scan a generous index band with exact comparisons
    std::int64_t kmin = (Rational(l) * a).floor() - 2, kmax = (Rational(h) * a).ceil() + 2;
    std::vector<std::int64_t> want;
    for (std::int64_t k = kmin; k <= kmax; ++k) {
      Rational x = (Rational(k) + Rational(1, 2)) / a;
      if (!(x < Rational(l)) && x < Rational(h)) want.push_back(k);
    }
    REQUIRE(want.size() == pts.size());
    for (std::size_t j = 0; j < want.size(); ++j) CHECK(pts[j].first == want[j]);
  }
}

TEST_CASE("Fraenkel counting identities for irrational a up to 10^6") {
  for (auto a : {constants::sqrt2inv(), constants::golden(), constants::inv_pi()}) {
    ExactScalar b = ExactScalar(Rational(1)) - a;
    std::int64_t bad = 0;
    for (std::int64_t N = 1; N <= 1'000'000; ++N) {
      if (count_F(a, N) + count_F(b, N) != N) ++bad;
      if (count_G(a, N) + count_G(b, N) != N) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("count_G counts lattice points in [-N, 0)") {
  for (auto a : {constants::sqrt2inv(), constants::golden()}) {
    AffineLattice L(a);
    for (std::int64_t N = 1; N < 300; ++N) CHECK(count_G(a, N) == L.count_in(Window::ints(-N, 0)));
  }
}
