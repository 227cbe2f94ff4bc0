#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <set>

#include "rieszpart/rounding.hpp"

using namespace rieszpart;

namespace {

std::vector<std::int64_t> image_in(const RoundingMap& m, std::int64_t lo, std::int64_t hi) {
  IndexRange r = m.sources_for_targets(lo, hi);
  std::vector<std::int64_t> out;
  for (auto k = r.first; k < r.end; ++k) out.push_back(m(k));
  return out;
}

Rational random_fraction(std::mt19937_64& rng, std::int64_t maxden) {
  std::uniform_int_distribution<std::int64_t> den(2, maxden);
  std::int64_t q = den(rng);
  std::uniform_int_distribution<std::int64_t> num(1, q - 1);
  return Rational(num(rng), q);
}

// exact cover + disjointness of the two images on target indices [lo, hi)
bool partitions(const RoundingPair& p, std::int64_t lo, std::int64_t hi) {
  auto A = image_in(p.phi, lo, hi), B = image_in(p.psi, lo, hi);
  std::vector<std::int64_t> all(A);
  all.insert(all.end(), B.begin(), B.end());
  std::sort(all.begin(), all.end());
  if (static_cast<std::int64_t>(all.size()) != hi - lo) return false;
  for (std::int64_t i = 0; i < hi - lo; ++i)
    if (all[static_cast<std::size_t>(i)] != lo + i) return false;
  return true;
}

}  // namespace

TEST_CASE("irrational split reproduces the two-colour picture") {
  auto a = constants::sqrt2inv();
  auto pair = build_pair(a, ExactScalar(Rational(1)) - a);
  CHECK(pair.phi.parity_case() == ParityCase::Irrational);
  CHECK(pair.period == 1);
  const std::vector<std::int64_t> yellow = {-5, -4, -3, -1, 0, 2, 3, 4, 6, 7, 9, 10, 12, 13, 14, 16, 17, 19, 20, 21, 23, 24};
  const std::vector<std::int64_t> blue = {-6, -2, 1, 5, 8, 11, 15, 18, 22};
  CHECK(image_in(pair.phi, -6, 25) == yellow);
  CHECK(image_in(pair.psi, -6, 25) == blue);
}

TEST_CASE("odd K0: a=2/5, b=3/5") {
  auto pair = build_pair(ExactScalar::rational(2, 5), ExactScalar::rational(3, 5));
  CHECK(pair.phi.parity_case() == ParityCase::RationalOdd);
  CHECK(pair.period == 5);
  CHECK(pair.phi(0) == 1);  // 1.25 -> 1.5
  CHECK(pair.phi(1) == 3);  // 3.75 -> 3.5
  CHECK(partitions(pair, 0, 5));
  CHECK(verify_zero_avdonin_block(pair.phi) == Rational(0));
  CHECK(verify_zero_avdonin_block(pair.psi) == Rational(0));
}

TEST_CASE("even K0: a=b=1/2") {
  auto pair = build_pair(ExactScalar::rational(1, 2), ExactScalar::rational(1, 2));
  CHECK(pair.phi.parity_case() == ParityCase::RationalEven);
  CHECK(pair.period == 4);
  // sources 1,3,5,7 are k = 0..3
  CHECK(pair.phi(0) == 1);
  CHECK(pair.phi(1) == 2);
  CHECK(pair.phi(2) == 5);
  CHECK(pair.phi(3) == 6);
  CHECK(pair.psi(0) == 0);
  CHECK(pair.psi(1) == 3);
  CHECK(pair.psi(2) == 4);
  CHECK(pair.psi(3) == 7);
  CHECK(partitions(pair, 0, 4));
  CHECK(verify_zero_avdonin_block(pair.phi) == Rational(0));
  CHECK(verify_zero_avdonin_block(pair.psi) == Rational(0));
  CHECK(pair.phi.correction() != "none");
}

TEST_CASE("odd K0: a=1/3, b=2/3") {
  auto pair = build_pair(ExactScalar::rational(1, 3), ExactScalar::rational(2, 3));
  CHECK(pair.period == 3);
  CHECK(verify_zero_avdonin_block(pair.phi) == Rational(0));
  CHECK(verify_zero_avdonin_block(pair.psi) == Rational(0));
}

TEST_CASE("zero block sums on random rational pairs, scaled totals") {
  std::mt19937_64 rng(42);
  int even = 0, odd = 0;
  for (int i = 0; i < 300; ++i) {
    Rational a = random_fraction(rng, 40);
    Rational scale = random_fraction(rng, 9) + Rational(1);
    auto pair = build_pair(ExactScalar(a * scale), ExactScalar((Rational(1) - a) * scale));
    (pair.phi.parity_case() == ParityCase::RationalEven ? even : odd)++;
    CHECK(verify_zero_avdonin_block(pair.phi) == Rational(0));
    CHECK(verify_zero_avdonin_block(pair.psi) == Rational(0));
  }
  CHECK(even > 20);
  CHECK(odd > 20);
}

TEST_CASE("local bijection on random blocks, all parity cases") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> block(-2000, 2000);
  std::uniform_int_distribution<int> mult(1, 3);
  std::uniform_real_distribution<long double> irr(0.05L, 0.95L);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    RoundingPair pair = [&] {
      if (i % 3 == 2) {
        long double x = irr(rng);
        return build_pair(ExactScalar::guarded(x), ExactScalar::guarded(1.0L - x));
      }
      Rational a = random_fraction(rng, 30);
      return build_pair(ExactScalar(a), ExactScalar(Rational(1) - a));
    }();
    std::int64_t K = pair.period * mult(rng);
    if (pair.period == 1) K = 17 * mult(rng);
    std::int64_t p = block(rng);
    CHECK(partitions(pair, p * K, (p + 1) * K));
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("periodicity and nearest-point property") {
  auto pair = build_pair(ExactScalar::rational(3, 7), ExactScalar::rational(5, 7));
  const auto& phi = pair.phi;
  for (std::int64_t k = -200; k < 200; ++k) {
    CHECK(phi(k + phi.source_period()) == phi(k) + phi.period());
    // uncorrected image is the nearest target point
    long double x = phi.source().point_ld(k);
    long double y = phi.target().point_ld(phi.uncorrected(k));
    long double step = 1.0L / phi.target().a().value();
    CHECK(std::fabs(x - y) <= step / 2 + 1e-15L);
  }
}

TEST_CASE("even K0 structure of uncorrected images") {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 40; ++t) {
    Rational a = random_fraction(rng, 30);
    auto pair = build_pair(ExactScalar(a), ExactScalar(Rational(1) - a));
    if (pair.phi.parity_case() != ParityCase::RationalEven) continue;
    const std::int64_t K0 = pair.phi.K0();
    std::multiset<std::int64_t> hits;
    const std::int64_t lo = -6 * K0, hi = 6 * K0;
    for (const auto* m : {&pair.phi, &pair.psi}) {
      IndexRange r = m->sources_for_targets(lo - 2, hi + 2);
      for (auto k = r.first; k < r.end; ++k) hits.insert(m->uncorrected(k));
    }
    for (std::int64_t y = lo; y < hi; ++y) {
      std::int64_t r = ((y % K0) + K0) % K0;
      auto c = hits.count(y);
      if (r == K0 / 2) CHECK(c == 2);
      else if (r == K0 / 2 - 1) CHECK(c == 0);
      else CHECK(c == 1);
    }
  }
}

TEST_CASE("Beatty-Fraenkel scans") {
  auto r1 = verify_beatty(constants::sqrt2inv(), 1'000'000);
  CHECK(r1.ok());
  CHECK(r1.hits_a + r1.hits_b == 2'000'000);
  CHECK(verify_beatty(constants::golden(), 1'000'000).ok());
  auto half = verify_beatty(ExactScalar::rational(1, 2), 1);
  CHECK_FALSE(half.ok());
  CHECK(half.collisions == std::vector<std::int64_t>{-1});
  auto h2 = verify_beatty(ExactScalar::rational(1, 2), 2);
  CHECK(std::find(h2.collisions.begin(), h2.collisions.end(), 1) != h2.collisions.end());
  CHECK(std::find(h2.gaps.begin(), h2.gaps.end(), 0) != h2.gaps.end());
}

TEST_CASE("ties on guarded input abort") {
  auto pair = build_pair(ExactScalar::guarded(0.5L), ExactScalar::guarded(0.5L));
  CHECK(pair.phi.parity_case() == ParityCase::Irrational);
  CHECK_THROWS_AS(pair.phi(0), PrecisionError);
  CHECK_THROWS_AS(verify_beatty(ExactScalar::guarded(0.5L), 10), PrecisionError);
}
