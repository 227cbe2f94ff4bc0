#pragma once

// Fixed-seed generators shared by the property tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <random>

#include "rieszpart/rearrange.hpp"

namespace rieszpart::gen {

inline Rational fraction(std::mt19937_64& rng, std::int64_t maxden) {
  std::uniform_int_distribution<std::int64_t> den(2, maxden);
  std::int64_t q = den(rng);
  std::uniform_int_distribution<std::int64_t> num(1, q - 1);
  return Rational(num(rng), q);
}

/// a in (0,1): rational with small denominator half the time, otherwise an
/// irrational-looking guarded value.
inline ExactScalar length(std::mt19937_64& rng) {
  if (rng() % 2) return fraction(rng, 40);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  // sqrt of a non-square keeps the value away from small-denominator ties
  long double x = u(rng) + std::sqrt(2.0L) * 1e-7L;
  return ExactScalar::guarded(x);
}

/// A block problem built the way the stage composer builds them: one block
/// of K target points of (Z+1/2)/(a+b), phi_hat/psi_hat the rounding pair
/// restricted to it, sigma a random perturbation bounded by m_sigma.
inline BlockProblem block_problem(std::mt19937_64& rng) {
  ExactScalar a = length(rng);
  ExactScalar total = a + ExactScalar(fraction(rng, 30)) * (ExactScalar(Rational(1)) - a) + a;  // total in (2a, 1+a)
  RoundingPair pair = split_pair(a, total);
  const long double d = total.value();
  std::uniform_int_distribution<std::int64_t> Kd(1, 12);
  const std::int64_t K = pair.period * Kd(rng) * (pair.period < 8 ? 8 : 1);
  std::uniform_int_distribution<std::int64_t> blk(-5000, 5000);
  const std::int64_t base = blk(rng) * K;
  std::uniform_real_distribution<double> md(0.0, 3.0);
  const long double m_sigma = md(rng);
  std::uniform_real_distribution<double> pert(-1.0, 1.0);

  BlockProblem bp;
  bp.spacing = 1 / d;
  const IndexRange ba = pair.phi.sources_for_targets(base, base + K);
  const IndexRange bb = pair.psi.sources_for_targets(base, base + K);
  long double m_hat = 0;
  for (auto k = ba.first; k < ba.end; ++k) {
    bp.source_a.push_back(pair.phi.source().point_ld(k));
    bp.initial.push_back(pair.phi(k) - base);
    m_hat = std::max(m_hat, std::fabs(pair.phi.target().point_ld(pair.phi(k)) - bp.source_a.back()));
  }
  for (auto k = bb.first; k < bb.end; ++k) {
    bp.source_b.push_back(pair.psi.source().point_ld(k));
    m_hat = std::max(m_hat, std::fabs(pair.psi.target().point_ld(pair.psi(k)) - bp.source_b.back()));
  }
  for (std::int64_t t = base; t < base + K; ++t) {
    const long double x = pair.phi.target().point_ld(t);
    bp.targets.push_back(x);
    bp.sigma.push_back(x + m_sigma * pert(rng));
  }
  bp.m_hat = std::max(m_hat, m_sigma);
  return bp;
}

}  // namespace rieszpart::gen
