#include "rieszpart/lattice.hpp"

#include <stdexcept>

namespace rieszpart {

Window::Window(ExactScalar lo_, ExactScalar hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (!less(lo, hi)) throw std::invalid_argument("window needs lo < hi, got [" + lo.str() + ", " + hi.str() + ")");
}

AffineLattice::AffineLattice(ExactScalar a, ExactScalar alpha) : a_(std::move(a)), alpha_(std::move(alpha)) {
  if (a_.sign() <= 0) throw std::invalid_argument("lattice density must be positive, got " + a_.str());
  inv_a_ = 1.0L / a_.value();
  alpha_ld_ = alpha_.value();
}

ExactScalar AffineLattice::point(std::int64_t k) const {
  return (ExactScalar(Rational(k)) + alpha_) / a_;
}

long double AffineLattice::point_ld(std::int64_t k) const {
  if (is_rational()) return point(k).value();
  return (static_cast<long double>(k) + alpha_ld_) * inv_a_;
}

namespace {
// ceil(a*x - alpha)
std::int64_t ceil_index(const ExactScalar& a, const ExactScalar& alpha, const ExactScalar& x) {
  ExactScalar v = alpha - a * x;  // ceil(y) = -floor(-y)
  return -floor_scaled(v, Rational(1)).value;
}
}  // namespace

std::int64_t AffineLattice::index_floor(const ExactScalar& x) const {
  return floor_scaled(a_ * x - alpha_, Rational(1)).value;
}

IndexRange AffineLattice::index_range(const Window& w) const {
  return {ceil_index(a_, alpha_, w.lo), ceil_index(a_, alpha_, w.hi)};
}

std::vector<std::pair<std::int64_t, ExactScalar>> AffineLattice::enumerate(const Window& w) const {
  IndexRange r = index_range(w);
  std::vector<std::pair<std::int64_t, ExactScalar>> out;
  out.reserve(static_cast<std::size_t>(r.size()));
  for (std::int64_t k = r.first; k < r.end; ++k) out.emplace_back(k, point(k));
  return out;
}

std::int64_t count_F(const ExactScalar& a, std::int64_t N) {
  return floor_scaled(a * Rational(N) + Rational(1, 2), Rational(1)).value;
}

std::int64_t count_G(const ExactScalar& a, std::int64_t N) {
  // -ceil(-aN + 1/2) + 1 = floor(aN - 1/2) + 1
  return floor_scaled(a * Rational(N) - Rational(1, 2), Rational(1)).value + 1;
}

}  // namespace rieszpart
