#include "rieszpart/rounding.hpp"

#include <cmath>
#include <sstream>

namespace rieszpart {

const char* to_string(ParityCase p) {
  switch (p) {
    case ParityCase::Irrational: return "irrational";
    case ParityCase::RationalOdd: return "rational-odd";
    case ParityCase::RationalEven: return "rational-even";
  }
  return "?";
}

RoundingMap::RoundingMap(ExactScalar c, ExactScalar d, Role role, std::int64_t n0, std::int64_t k0)
    : c_(c),
      d_(d),
      source_(c),
      target_(d),
      role_(role),
      parity_(k0 == 0 ? ParityCase::Irrational
                      : (k0 % 2 ? ParityCase::RationalOdd : ParityCase::RationalEven)),
      n0_(n0),
      k0_(k0),
      floor_(Rational(1, 2), d / c),
      ratio_ld_(c.value() / d.value()) {
  if (!less(c, d)) throw std::invalid_argument("rounding map needs c < d");
}

std::int64_t RoundingMap::period() const {
  switch (parity_) {
    case ParityCase::Irrational: return 1;
    case ParityCase::RationalOdd: return k0_;
    case ParityCase::RationalEven: return 2 * k0_;
  }
  return 1;
}

std::int64_t RoundingMap::source_period() const {
  if (parity_ == ParityCase::Irrational) return 0;
  std::int64_t n = role_ == Role::Lower ? n0_ : k0_ - n0_;
  return parity_ == ParityCase::RationalEven ? 2 * n : n;
}

std::string RoundingMap::correction() const {
  if (parity_ != ParityCase::RationalEven) return "none";
  std::ostringstream os;
  if (role_ == Role::Lower)
    os << "integer positions in [" << k0_ << "," << 2 * k0_ << ") mod " << 2 * k0_ << " shifted down by one";
  else
    os << "integer positions in [0," << k0_ << ") mod " << 2 * k0_ << " shifted down by one";
  return os.str();
}

std::int64_t RoundingMap::uncorrected(std::int64_t k) const {
  FloorResult f = floor_(k);
  if (f.tie) {
    std::ostringstream os;
    os << "rounding of source index " << k << " (c=" << c_.str() << ", d=" << d_.str()
       << ") lands within guard of an integer: input indistinguishable from rational at this precision";
    throw PrecisionError(os.str());
  }
  return f.value;
}

std::int64_t RoundingMap::operator()(std::int64_t k) const {
  std::int64_t m = uncorrected(k);
  if (parity_ == ParityCase::RationalEven && floor_.exact_integer(k)) {
    std::int64_t pos = m % (2 * k0_);
    if (pos < 0) pos += 2 * k0_;
    bool upper_half = pos >= k0_;
    if ((role_ == Role::Lower) == upper_half) --m;
  }
  return m;
}

std::int64_t RoundingMap::first_source_at_or_above(std::int64_t m) const {
  long double guess = (static_cast<long double>(m) + 0.5L) * ratio_ld_ - 0.5L;
  auto k = static_cast<std::int64_t>(std::floor(guess));
  while ((*this)(k) < m) ++k;
  while ((*this)(k - 1) >= m) --k;
  return k;
}

IndexRange RoundingMap::sources_for_targets(std::int64_t m_first, std::int64_t m_end) const {
  if (m_end <= m_first) return {0, 0};
  return {first_source_at_or_above(m_first), first_source_at_or_above(m_end)};
}

namespace {
RoundingPair make_pair(const ExactScalar& a, const ExactScalar& b, const ExactScalar& total) {
  if (a.sign() <= 0 || b.sign() <= 0) throw std::invalid_argument("rounding pair needs positive lengths");
  std::int64_t n0 = 0, k0 = 0;
  if (auto r = lowest_terms_ratio(a, total)) {
    n0 = r->first;
    k0 = r->second;
  }
  RoundingMap phi(a, total, Role::Lower, n0, k0);
  RoundingMap psi(b, total, Role::Upper, n0, k0);
  return {phi, psi, phi.period(), total};
}
}  // namespace

RoundingPair build_pair(const ExactScalar& a, const ExactScalar& b) { return make_pair(a, b, a + b); }

RoundingPair split_pair(const ExactScalar& a, const ExactScalar& total) { return make_pair(a, total - a, total); }

BeattyReport verify_beatty(const ExactScalar& a, std::int64_t N) {
  if (N <= 0) throw std::invalid_argument("verify_beatty needs N > 0");
  if (!(a.sign() > 0) || !less(a, Rational(1))) throw std::invalid_argument("verify_beatty needs 0 < a < 1");
  BeattyReport rep;
  rep.N = N;
  std::vector<std::uint8_t> hits(static_cast<std::size_t>(2 * N), 0);
  const Window w = Window::ints(-N, N);
  auto scan = [&](const ExactScalar& len, std::int64_t& count) {
    AffineLattice lat(len);
    IndexRange r = lat.index_range(w);
    AffineFloor fl(Rational(1, 2), ExactScalar(Rational(1)) / len);
    for (std::int64_t k = r.first; k < r.end; ++k) {
      FloorResult f = fl(k);
      if (f.tie) {
        std::ostringstream os;
        os << "Beatty scan: (" << k << "+1/2)/" << len.str()
           << " within guard of an integer; input indistinguishable from rational at this precision";
        throw PrecisionError(os.str());
      }
      if (f.value < -N || f.value >= N) continue;
      auto& h = hits[static_cast<std::size_t>(f.value + N)];
      if (h < 2) ++h;
      ++count;
    }
  };
  scan(a, rep.hits_a);
  scan(ExactScalar(Rational(1)) - a, rep.hits_b);
  for (std::int64_t v = -N; v < N; ++v) {
    auto h = hits[static_cast<std::size_t>(v + N)];
    if (h == 0) rep.gaps.push_back(v);
    if (h > 1) rep.collisions.push_back(v);
  }
  return rep;
}

Rational verify_zero_avdonin_block(const RoundingMap& map) {
  if (map.parity_case() == ParityCase::Irrational)
    throw std::invalid_argument("zero block sum is only defined for rational rounding maps");
  const auto& src = map.source();
  const auto& tgt = map.target();
  Rational sum(0);
  std::ostringstream terms;
  // sources in [0, period/d): exactly indices 0 .. source_period-1
  IndexRange r = src.index_range(Window(Rational(0), ExactScalar(Rational(map.period())) / tgt.a()));
  if (r.first != 0 || r.end != map.source_period())
    throw std::logic_error("period window does not match the expected source count");
  for (std::int64_t k = r.first; k < r.end; ++k) {
    std::int64_t m = map(k);
    Rational term = tgt.point(m).as_rational() - src.point(k).as_rational();
    terms << "  k=" << k << " -> m=" << m << " : " << term.str() << "\n";
    sum += term;
  }
  if (sum != Rational(0))
    throw std::logic_error("nonzero period block sum " + sum.str() + " (" + to_string(map.parity_case()) +
                           ", correction: " + map.correction() + ")\n" + terms.str());
  return sum;
}

}  // namespace rieszpart
