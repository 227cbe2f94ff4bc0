#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "rieszpart/analysis.hpp"
#include "rieszpart/compose.hpp"

using namespace rieszpart;

namespace {

const ExactScalar one = Rational(1);

// every index in [lo, hi) lands in exactly one set, and no target repeats anywhere
void check_partition(const PartitionResult& r, std::int64_t lo, std::int64_t hi) {
  std::set<std::int64_t> seen;
  for (const auto& s : r.sets)
    for (auto t : s.map.targets()) REQUIRE(seen.insert(t).second);
  std::vector<std::int64_t> all;
  for (std::size_t j = 0; j < r.sets.size(); ++j) {
    auto idx = r.indices(j);
    all.insert(all.end(), idx.begin(), idx.end());
  }
  std::sort(all.begin(), all.end());
  REQUIRE(static_cast<std::int64_t>(all.size()) == hi - lo);
  for (std::int64_t i = 0; i < hi - lo; ++i) CHECK(all[static_cast<std::size_t>(i)] == lo + i);
}

void check_budgets(const PartitionResult& r) {
  const long double delta = std::pow(4.0L, -r.K);
  CHECK(r.delta == delta);
  for (const auto& s : r.sets) {
    CAPTURE(s.label);
    CHECK(s.cert.epsilon_hat <= delta);
    CHECK(s.cert.epsilon_hat <= s.budget);
    CHECK(s.riesz.pass);
  }
  for (const auto& u : r.unions) {
    CAPTURE(u.J.size());
    const long double budget = std::pow(4.0L, static_cast<long double>(u.J.size()) - 1) * delta;
    CHECK(u.budget == budget);
    CHECK(u.cert.epsilon_hat <= budget);
    CHECK(budget <= 0.25L);
    CHECK(u.riesz.pass);
  }
  CHECK(r.all_pass());
}

}  // namespace

TEST_CASE("stage budgets") {
  CHECK(stage_epsilon(1, 1.0L / 16) == 1.0L / 32);
  CHECK(stage_epsilon(2, 1.0L / 16) == doctest::Approx(1.0 / (16 * 4 * 3)));
  long double total = 0;
  for (int j = 1; j < 40; ++j) total += stage_epsilon(j, 1);
  CHECK(total < 1);  // 1/2 + sum_{j>=2} 1/(3*2^j) = 2/3
}

TEST_CASE("tail normalisation") {
  auto b = normalized_lengths({Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(b[2] == ExactScalar(Rational(1, 3)));
  CHECK_THROWS_AS(normalized_lengths({Rational(1, 3), Rational(1, 2)}), std::invalid_argument);
  CHECK_THROWS_AS(normalized_lengths({Rational(2, 3), Rational(2, 3)}), std::invalid_argument);
  CHECK_THROWS_AS(normalized_lengths({Rational(0), Rational(1)}), std::invalid_argument);
  auto s2 = constants::sqrt2inv();
  auto g = normalized_lengths({s2, ExactScalar::guarded(1 - s2.value())});
  CHECK(g[1] == one - s2);
  CHECK_THROWS_AS(normalized_lengths({s2, ExactScalar::guarded(0.2928)}), std::invalid_argument);
}

TEST_CASE("one half twice: exact, certificates zero") {
  PartitionSpec spec{{Rational(1, 2), Rational(1, 2)}};
  auto r = build_partition(spec, Window::ints(-100, 100));
  REQUIRE(r.sets.size() == 2);
  check_partition(r, -100, 100);
  check_budgets(r);
  for (const auto& s : r.sets) {
    REQUIRE(s.cert.epsilon_exact);
    CHECK(*s.cert.epsilon_exact == Rational(0));
  }
  REQUIRE(r.unions.size() == 1);
  CHECK(*r.unions[0].cert.epsilon_exact == Rational(0));
}

TEST_CASE("thirds: exact pipeline, every union certified at zero") {
  PartitionSpec spec{{Rational(1, 3), Rational(1, 3), Rational(1, 3)}};
  auto r = build_partition(spec, Window::ints(-100, 100));
  check_partition(r, -100, 100);
  check_budgets(r);
  CHECK(r.unions.size() == 4);  // {1,2},{1,3},{2,3},{1,2,3}
  for (const auto& s : r.sets) CHECK(*s.cert.epsilon_exact == Rational(0));
  for (const auto& u : r.unions) {
    REQUIRE(u.cert.epsilon_exact);
    CHECK(*u.cert.epsilon_exact == Rational(0));
  }
}

TEST_CASE("two-colour picture through build_partition") {
  auto a = constants::sqrt2inv();
  PartitionSpec spec{{a, one - a}};
  auto r = build_partition(spec, Window::ints(-6, 25));
  CHECK(r.indices(0) == std::vector<std::int64_t>{-5, -4, -3, -1, 0, 2, 3, 4, 6, 7, 9, 10, 12, 13, 14, 16, 17, 19, 20, 21, 23, 24});
  CHECK(r.indices(1) == std::vector<std::int64_t>{-6, -2, 1, 5, 8, 11, 15, 18, 22});
  check_budgets(r);

  // shifted to Z the yellow set is floor((Z+1/2)/a)
  auto z = shift_to_integers(r);
  CHECK(z.shifted);
  auto f = z.frequencies(0);
  std::vector<long double> expect;
  for (std::int64_t k = -10; k < 30; ++k) {
    long double v = std::floor((k + 0.5L) / a.value());
    if (v >= -6 && v < 25) expect.push_back(v);
  }
  CHECK(f == expect);
  auto back = shift_to_half_integers(z);
  CHECK(back.frequencies(0) == r.frequencies(0));
  CHECK(back.frequencies(1) == r.frequencies(1));
}

TEST_CASE("three lengths with a switch stage: naive green vs balanced") {
  auto s2 = constants::sqrt2inv();
  PartitionSpec spec{{one - s2, Rational(1, 5), s2 - Rational(1, 5)}};
  auto r = build_partition(spec, Window::ints(-6, 25));
  check_partition(r, -6, 25);
  check_budgets(r);
  CHECK(r.indices(0) == std::vector<std::int64_t>{-6, -2, 1, 5, 8, 11, 15, 18, 22});

  RoundingPair p1 = split_pair(one - s2, one);
  IndexRange src = p1.psi.sources_for_targets(-200, 200);
  std::vector<std::int64_t> t;
  for (auto k = src.first; k < src.end; ++k) t.push_back(p1.psi(k));
  FrequencyMap sigma(p1.psi.source(), p1.psi.target(), src.first, t);
  RoundingPair p2 = split_pair(Rational(1, 5), s2);
  FrequencyMap naive = naive_compose(p2.phi, sigma);
  std::vector<std::int64_t> green;
  for (auto x : naive.sorted_range())
    if (x >= -6 && x < 25) green.push_back(x);
  CHECK(green == std::vector<std::int64_t>{-3, 2, 7, 12, 17, 21});
}

TEST_CASE("four mixed lengths, K = 3") {
  auto g = constants::golden();
  PartitionSpec spec{{Rational(1, 5), g - Rational(1, 5), Rational(1, 7), Rational(6, 7) - g}, 3};
  auto r = build_partition(spec, Window::ints(-1000, 1000));
  CHECK(r.K == 3);
  check_partition(r, -1000, 1000);
  check_budgets(r);
  CHECK(r.unions.size() == 10);  // 6 pairs + 4 triples
}

TEST_CASE("densities of constructed sets") {
  auto s2 = constants::sqrt2inv();
  PartitionSpec spec{{Rational(1, 5), s2 - Rational(1, 5), one - s2}};
  auto r = build_partition(spec, Window::ints(-100000, 100000));
  for (std::size_t j = 0; j < r.sets.size(); ++j) {
    auto f = r.sets[j].map.range_points();
    std::sort(f.begin(), f.end());
    auto d = beurling_density(f, {100000});
    const long double b = r.lengths[j].value();
    CAPTURE(j);
    CHECK(std::fabs(d.radii[0].d_minus - b) <= 2e-5L);
    CHECK(std::fabs(d.radii[0].d_plus - b) <= 2e-5L);
  }
}

TEST_CASE("tail label and explicit unions") {
  PartitionSpec spec{{Rational(1, 2), Rational(1, 4), Rational(1, 4)}, 2, true};
  PartitionOptions opt;
  opt.unions = {{3, 1}};
  auto r = build_partition(spec, Window::ints(-50, 50), opt);
  CHECK(r.sets.back().label == "tail");
  REQUIRE(r.unions.size() == 1);
  CHECK(r.unions[0].J == std::vector<int>{1, 3});
  CHECK(r.unions[0].length == ExactScalar(Rational(3, 4)));
  opt.unions = {{0, 1}};
  CHECK_THROWS_AS(build_partition(spec, Window::ints(-50, 50), opt), std::invalid_argument);
}

TEST_CASE("union of overlapping maps names the shared frequency") {
  PartitionSpec spec{{Rational(1, 2), Rational(1, 2)}};
  auto r = build_partition(spec, Window::ints(-10, 10));
  try {
    combine_union({r.sets[0].map, r.sets[0].map}, {Rational(1, 2), Rational(1, 2)});
    FAIL("expected an overlap error");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("lies in the ranges of maps 1 and 2") != std::string::npos);
  }
}

TEST_CASE("single length is the identity") {
  auto r = build_partition({{Rational(1)}}, Window::ints(-10, 10));
  REQUIRE(r.sets.size() == 1);
  CHECK(*r.sets[0].cert.epsilon_exact == Rational(0));
  CHECK(r.indices(0).size() == 20);
}

TEST_CASE("deterministic") {
  auto s2 = constants::sqrt2inv();
  PartitionSpec spec{{one - s2, Rational(1, 5), s2 - Rational(1, 5)}};
  auto a = build_partition(spec, Window::ints(-300, 300));
  auto b = build_partition(spec, Window::ints(-300, 300));
  for (std::size_t j = 0; j < a.sets.size(); ++j) CHECK(a.sets[j].map.targets() == b.sets[j].map.targets());
  CHECK(a.log == b.log);
}
