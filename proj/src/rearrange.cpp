#include "rieszpart/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rieszpart {

long double block_residual(const BlockProblem& p, const std::vector<std::int64_t>& range) {
  long double s = 0;
  for (auto t : range) s += p.sigma[static_cast<std::size_t>(t)];
  for (auto x : p.source_a) s -= x;
  return s;
}

namespace {

std::vector<std::int64_t> complement(std::int64_t K, const std::vector<std::int64_t>& range) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(K) - range.size());
  std::size_t j = 0;
  for (std::int64_t t = 0; t < K; ++t) {
    if (j < range.size() && range[j] == t) {
      ++j;
      continue;
    }
    out.push_back(t);
  }
  return out;
}

std::vector<std::int64_t> packed(std::int64_t K, std::size_t N, bool left) {
  std::vector<std::int64_t> r(N);
  for (std::size_t i = 0; i < N; ++i) r[i] = left ? static_cast<std::int64_t>(i) : K - static_cast<std::int64_t>(N - i);
  return r;
}

}  // namespace

BalancedAssignment block_balance(const BlockProblem& p) {
  const auto K = static_cast<std::int64_t>(p.targets.size());
  const std::size_t N = p.source_a.size();
  if (p.sigma.size() != p.targets.size() || p.initial.size() != N || N + p.source_b.size() != p.targets.size())
    throw std::invalid_argument("block problem violates the counting identity");
  BalancedAssignment out;
  std::vector<std::int64_t> P = p.initial;
  const long double tol = out.tolerance(p);
  const long double step_bound = 2 * p.m_hat + p.spacing;
  // slack for rounding in the step check
  const long double slack = 1e-9L * (1 + std::fabs(p.targets.empty() ? 0 : p.targets.back()));
  long double S = block_residual(p, P);

  auto move = [&](std::size_t i, std::int64_t dir) {
    const auto from = static_cast<std::size_t>(P[i]);
    const auto to = static_cast<std::size_t>(P[i] + dir);
    long double step = p.sigma[to] - p.sigma[from];
    if (std::fabs(step) > step_bound + slack) {
      std::ostringstream os;
      os << "swap step " << static_cast<double>(step) << " exceeds 2*M_hat + 1/(a+b) = " << static_cast<double>(step_bound);
      throw std::logic_error(os.str());
    }
    out.max_step = std::max(out.max_step, std::fabs(step));
    P[i] += dir;
    S += step;
    ++out.swaps;
  };

  bool done = std::fabs(S) <= tol;
  if (!done && S > tol) {
    for (std::size_t i = 0; i < N && !done; ++i)
      while (P[i] > static_cast<std::int64_t>(i) && !done) {
        move(i, -1);
        done = std::fabs(S) <= tol;
      }
  } else if (!done) {
    for (std::size_t i = N; i-- > 0 && !done;)
      while (P[i] < K - static_cast<std::int64_t>(N - i) && !done) {
        move(i, +1);
        done = std::fabs(S) <= tol;
      }
  }
  if (!done) {
    long double sl = block_residual(p, packed(K, N, true));
    long double sr = block_residual(p, packed(K, N, false));
    std::ostringstream os;
    os << "block balance failed: S(left-packed)=" << static_cast<double>(sl)
       << ", S(right-packed)=" << static_cast<double>(sr) << ", tolerance " << static_cast<double>(tol);
    throw BalanceFailure(os.str(), sl, sr);
  }
  // recompute from scratch so the reported residual carries no drift
  out.S = block_residual(p, P);
  out.phi_range = std::move(P);
  out.psi_range = complement(K, out.phi_range);
  return out;
}

namespace {

FrequencyMap realize(const RoundingMap& m, IndexRange r) {
  std::vector<std::int64_t> t;
  t.reserve(static_cast<std::size_t>(r.size()));
  for (auto k = r.first; k < r.end; ++k) t.push_back(m(k));
  return {m.source(), m.target(), r.first, std::move(t)};
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -static_cast<std::int64_t>(floor_div(-static_cast<__int128>(a), b)); }

std::string fmt(long double v) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(v);
  return os.str();
}

}  // namespace

StageResult compose_and_certify(const RoundingPair& pair, const FrequencyMap& sigma, long double delta,
                                long double epsilon, const StageOptions& opt) {
  if (!(sigma.source() == pair.phi.target())) throw std::invalid_argument("outer map lives on a different lattice");
  const ExactScalar& total = pair.total;
  const long double d = total.value();
  const long double spacing = 1.0L / d;
  const IndexRange dom = sigma.domain();

  StageReport rep;
  // displacement of the rounding maps over the whole intermediate window
  {
    auto fa = realize(pair.phi, pair.phi.sources_for_targets(dom.first, dom.end));
    auto fb = realize(pair.psi, pair.psi.sources_for_targets(dom.first, dom.end));
    rep.m_hat = std::max({sigma.displacement_bound(), fa.displacement_bound(), fb.displacement_bound()});
  }
  const std::int64_t period = pair.period;
  auto round_up = [&](long double v) {
    auto k = static_cast<std::int64_t>(std::ceil(v / static_cast<long double>(period)));
    return std::max<std::int64_t>(k, 1) * period;
  };
  std::int64_t K = round_up((rep.m_hat * d + 0.5L) / delta);
  if (opt.initial_K > K) K = round_up(static_cast<long double>(opt.initial_K));
  rep.log.push_back("block inequality M_hat*(a+b)+1/2 <= delta*K gives K=" + std::to_string(K) + " (M_hat=" +
                    fmt(rep.m_hat) + ", delta=" + fmt(delta) + ")");

  CertificateOptions copt;
  copt.max_blocks = opt.max_blocks;
  copt.min_blocks = opt.min_blocks;

  for (;; K *= 2) {
    if (K > opt.max_K) throw BudgetMiss("block size exceeded the doubling limit at K=" + std::to_string(K), rep);
    rep.K = K;
    rep.R = ExactScalar(Rational(K)) / total;
    const std::int64_t l0 = ceil_div(dom.first, K);
    const std::int64_t l1 = static_cast<std::int64_t>(floor_div(dom.end, K));  // exclusive
    if (l1 - l0 < opt.min_blocks) {
      std::ostringstream os;
      os << "intermediate window [" << dom.first << "," << dom.end << ") holds " << std::max<std::int64_t>(l1 - l0, 0)
         << " blocks of K=" << K << ", need " << opt.min_blocks;
      throw WindowTooSmall(os.str());
    }
    const std::int64_t T0 = l0 * K, T1 = l1 * K;
    const IndexRange ra = pair.phi.sources_for_targets(T0, T1);
    const IndexRange rb = pair.psi.sources_for_targets(T0, T1);
    auto phi_hat = realize(pair.phi, ra);
    auto psi_hat = realize(pair.psi, rb);
    rep.phi_hat_cert = measure_discrepancy(phi_hat, rep.R, copt);
    rep.psi_hat_cert = measure_discrepancy(psi_hat, rep.R, copt);
    rep.sigma_cert = measure_discrepancy(sigma, rep.R, copt);
    if (rep.phi_hat_cert.epsilon_hat > delta || rep.psi_hat_cert.epsilon_hat > delta ||
        rep.sigma_cert.epsilon_hat > epsilon) {
      rep.log.push_back("K=" + std::to_string(K) + ": prerequisites miss (phi_hat " + fmt(rep.phi_hat_cert.epsilon_hat) +
                        ", psi_hat " + fmt(rep.psi_hat_cert.epsilon_hat) + ", sigma " +
                        fmt(rep.sigma_cert.epsilon_hat) + "), doubling");
      continue;
    }

    std::vector<std::int64_t> Phi_t(static_cast<std::size_t>(ra.size()));
    std::vector<std::int64_t> Psi_t(static_cast<std::size_t>(rb.size()));
    rep.swaps = 0;
    rep.max_step = 0;
    rep.max_abs_S = 0;
    rep.blocks = l1 - l0;
    for (std::int64_t l = l0; l < l1; ++l) {
      const std::int64_t base = l * K;
      const IndexRange ba = pair.phi.sources_for_targets(base, base + K);
      const IndexRange bb = pair.psi.sources_for_targets(base, base + K);
      BlockProblem bp;
      bp.m_hat = rep.m_hat;
      bp.spacing = spacing;
      for (auto k = ba.first; k < ba.end; ++k) {
        bp.source_a.push_back(pair.phi.source().point_ld(k));
        bp.initial.push_back(phi_hat(k) - base);
      }
      for (auto k = bb.first; k < bb.end; ++k) bp.source_b.push_back(pair.psi.source().point_ld(k));
      for (std::int64_t t = base; t < base + K; ++t) {
        bp.targets.push_back(sigma.source().point_ld(t));
        bp.sigma.push_back(sigma.target().point_ld(sigma(t)));
      }
      BalancedAssignment as = block_balance(bp);
      rep.swaps += as.swaps;
      rep.max_step = std::max(rep.max_step, as.max_step);
      rep.max_abs_S = std::max(rep.max_abs_S, std::fabs(as.S));
      for (std::size_t i = 0; i < as.phi_range.size(); ++i)
        Phi_t[static_cast<std::size_t>(ba.first - ra.first) + i] = sigma(base + as.phi_range[i]);
      for (std::size_t j = 0; j < as.psi_range.size(); ++j)
        Psi_t[static_cast<std::size_t>(bb.first - rb.first) + j] = sigma(base + as.psi_range[j]);
    }
    FrequencyMap Phi(pair.phi.source(), sigma.target(), ra.first, std::move(Phi_t));
    FrequencyMap Psi(pair.psi.source(), sigma.target(), rb.first, std::move(Psi_t));
    rep.Phi_cert = measure_discrepancy(Phi, rep.R, copt);
    rep.Psi_cert = measure_discrepancy(Psi, rep.R, copt);
    rep.M = rep.m_hat + static_cast<long double>(K) / d;
    rep.measured_M = std::max(Phi.displacement_bound(), Psi.displacement_bound());
    const long double budget = epsilon + 3 * delta;
    rep.log.push_back("K=" + std::to_string(K) + " R=" + rep.R.str() + ": " + std::to_string(rep.blocks) +
                      " blocks, " + std::to_string(rep.swaps) + " swaps, max step " + fmt(rep.max_step) +
                      ", max|S| " + fmt(rep.max_abs_S) + ", Phi " + fmt(rep.Phi_cert.epsilon_hat) + ", Psi " +
                      fmt(rep.Psi_cert.epsilon_hat) + " vs budget " + fmt(budget) + ", M=" + fmt(rep.M) +
                      " (measured " + fmt(rep.measured_M) + ")");
    if (rep.Phi_cert.epsilon_hat <= budget && rep.Psi_cert.epsilon_hat <= budget)
      return {std::move(Phi), std::move(Psi), std::move(rep)};
  }
}

}  // namespace rieszpart
