#include "rieszpart/compose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rieszpart {

namespace {

FrequencyMap realize(const RoundingMap& m, IndexRange r) {
  std::vector<std::int64_t> t;
  t.reserve(static_cast<std::size_t>(r.size()));
  for (auto k = r.first; k < r.end; ++k) t.push_back(m(k));
  return {m.source(), m.target(), r.first, std::move(t)};
}

std::string fmt(long double v) {
  std::ostringstream os;
  os.precision(6);
  os << static_cast<double>(v);
  return os.str();
}

long double pow4(int e) { return std::ldexp(1.0L, 2 * e); }

// all index sets J with 2 <= |J| <= kmax over {1..n}
std::vector<std::vector<int>> all_unions(int n, int kmax) {
  std::vector<std::vector<int>> out;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> J;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) J.push_back(i + 1);
    if (J.size() >= 2 && static_cast<int>(J.size()) <= kmax) out.push_back(std::move(J));
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

}  // namespace

std::vector<ExactScalar> normalized_lengths(const std::vector<ExactScalar>& lengths) {
  if (lengths.empty()) throw std::invalid_argument("no lengths given");
  for (const auto& b : lengths)
    if (b.sign() <= 0) throw std::invalid_argument("lengths must be positive, got " + b.str());
  std::vector<ExactScalar> out = lengths;
  ExactScalar c = Rational(1);
  for (std::size_t j = 0; j + 1 < lengths.size(); ++j) {
    c = c - lengths[j];
    if (c.sign() <= 0) throw std::invalid_argument("lengths exceed 1 before the last one");
  }
  const ExactScalar& last = lengths.back();
  if (c.is_rational() && last.is_rational()) {
    if (!(c.as_rational() == last.as_rational()))
      throw std::invalid_argument("lengths sum to " + (ExactScalar(Rational(1)) - c + last).str() + ", not 1");
  } else {
    long double g = std::max(c.guard(), last.guard());
    if (std::fabs(c.value() - last.value()) > g) {
      std::ostringstream os;
      os.precision(20);
      os << "lengths do not sum to 1 within guard " << static_cast<double>(g) << " (tail "
         << static_cast<double>(c.value()) << " vs last length " << static_cast<double>(last.value()) << ")";
      throw std::invalid_argument(os.str());
    }
  }
  out.back() = c;
  return out;
}

long double stage_epsilon(int j, long double delta) {
  if (j <= 1) return delta / 2;
  return delta / (std::ldexp(1.0L, j) * 3);
}

std::vector<std::int64_t> PartitionResult::indices(std::size_t j) const {
  const auto& m = sets.at(j).map;
  std::vector<std::int64_t> all = m.sorted_range();
  if (!window) return all;
  std::vector<std::int64_t> out;
  for (auto t : all) {
    long double x = m.target().point_ld(t);
    if (x >= window->lo.value() && x < window->hi.value()) out.push_back(t);
  }
  return out;
}

std::vector<long double> PartitionResult::frequencies(std::size_t j) const {
  std::vector<long double> out;
  for (auto t : indices(j)) out.push_back(sets.at(j).map.target().point_ld(t));
  return out;
}

bool PartitionResult::all_pass() const {
  for (const auto& s : sets)
    if (!s.riesz.pass || s.cert.epsilon_hat > s.budget) return false;
  for (const auto& u : unions)
    if (!u.riesz.pass || u.cert.epsilon_hat > u.budget) return false;
  return true;
}

FrequencyMap naive_compose(const RoundingMap& phi, const FrequencyMap& sigma) {
  IndexRange d = sigma.domain();
  return realize(phi, phi.sources_for_targets(d.first, d.end)).then(sigma);
}

namespace {

FrequencyMap combine_two(const RoundingPair& pair, const FrequencyMap& tau, const FrequencyMap& eta) {
  if (!(tau.source() == pair.phi.source()) || !(eta.source() == pair.psi.source()))
    throw std::invalid_argument("union: map source lattice does not match its length");
  const IndexRange dt = tau.domain(), de = eta.domain();
  const std::int64_t y_lo = std::max(pair.phi(dt.first), pair.psi(de.first));
  const std::int64_t y_hi = std::min(pair.phi(dt.end - 1), pair.psi(de.end - 1)) + 1;
  if (y_hi <= y_lo) throw std::invalid_argument("union: input windows do not overlap");
  constexpr auto hole = std::numeric_limits<std::int64_t>::min();
  std::vector<std::int64_t> rho(static_cast<std::size_t>(y_hi - y_lo), hole);
  auto place = [&](const RoundingMap& r, const FrequencyMap& m) {
    for (auto k = m.domain().first; k < m.domain().end; ++k) {
      auto y = r(k);
      if (y < y_lo || y >= y_hi) continue;
      auto& slot = rho[static_cast<std::size_t>(y - y_lo)];
      if (slot != hole) throw std::logic_error("union: rounding pair is not injective");
      slot = m(k);
    }
  };
  place(pair.phi, tau);
  place(pair.psi, eta);
  if (std::find(rho.begin(), rho.end(), hole) != rho.end())
    throw std::logic_error("union: rounding pair ranges leave a hole");
  return {AffineLattice(pair.total), tau.target(), y_lo, std::move(rho)};
}

}  // namespace

UnionOutcome combine_union(const std::vector<FrequencyMap>& maps, const std::vector<ExactScalar>& lengths,
                           const UnionOptions& opt) {
  if (maps.empty() || maps.size() != lengths.size()) throw std::invalid_argument("union: need one length per map");
  for (const auto& m : maps)
    if (!(m.target() == maps.front().target())) throw std::invalid_argument("union: maps land on different grids");
  // overlap check, naming the colliding frequency
  {
    std::vector<std::pair<std::int64_t, std::size_t>> all;
    for (std::size_t i = 0; i < maps.size(); ++i)
      for (auto t : maps[i].targets()) all.emplace_back(t, i);
    std::sort(all.begin(), all.end());
    for (std::size_t i = 1; i < all.size(); ++i)
      if (all[i].first == all[i - 1].first) {
        std::ostringstream os;
        os << "union: frequency " << static_cast<double>(maps.front().target().point_ld(all[i].first))
           << " lies in the ranges of maps " << all[i - 1].second + 1 << " and " << all[i].second + 1;
        throw std::invalid_argument(os.str());
      }
  }
  UnionOutcome out{maps.front(), lengths.front(), {}, {}};
  std::int64_t period = 1;
  for (std::size_t i = 1; i < maps.size(); ++i) {
    RoundingPair pair = build_pair(out.length, lengths[i]);
    out.map = combine_two(pair, out.map, maps[i]);
    out.length = pair.total;
    period = pair.period;
    out.log.push_back("combined length " + out.length.str() + " (" + to_string(pair.phi.parity_case()) +
                      ", period " + std::to_string(period) + ")");
  }
  // smallest multiple of the pair period (in lattice units) with R >= min_R
  const ExactScalar unit = ExactScalar(Rational(period)) / out.length;
  auto mult = static_cast<std::int64_t>(std::ceil(opt.min_R.value() / unit.value() - 1e-12L));
  mult = std::max<std::int64_t>(mult, 1);
  for (int attempt = 0;; ++attempt, mult *= 2) {
    ExactScalar R = ExactScalar(Rational(mult)) * unit;
    out.cert = measure_discrepancy(out.map, R, opt.cert);
    out.log.push_back("union certificate at R=" + R.str() + ": " + fmt(out.cert.epsilon_hat));
    if (!opt.target || out.cert.epsilon_hat <= *opt.target || attempt >= opt.max_doublings) break;
  }
  return out;
}

PartitionResult build_partition(const PartitionSpec& spec, const Window& window, const PartitionOptions& opt) {
  const std::vector<ExactScalar> b = normalized_lengths(spec.lengths);
  const int n = static_cast<int>(b.size());
  PartitionResult res;
  res.lengths = b;
  res.K = spec.K > 0 ? spec.K : n;
  res.delta = 1.0L / pow4(res.K);
  res.window = window;
  const long double delta = res.delta;

  std::vector<ExactScalar> c(static_cast<std::size_t>(n));  // c[j] = 1 - b_1 - ... - b_j
  c[0] = Rational(1);
  for (int j = 1; j < n; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] - b[static_cast<std::size_t>(j - 1)];

  const auto need = static_cast<std::int64_t>(
      std::ceil(std::max({static_cast<long double>(opt.half_width), std::fabs(window.lo.value()), std::fabs(window.hi.value())})));
  std::int64_t pad = opt.pad;
  CertificateOptions copt;
  copt.max_blocks = opt.max_blocks;
  StageOptions sopt;
  sopt.max_blocks = opt.max_blocks;
  sopt.max_K = opt.max_K;
  const AffineLattice half_integers(Rational(1));

  for (int attempt = 0;; ++attempt, pad *= 2) {
    std::vector<std::string> log;
    const std::int64_t T0 = -(need + pad), T1 = need + pad;
    log.push_back("attempt " + std::to_string(attempt) + ": working region [" + std::to_string(T0) + "," +
                  std::to_string(T1) + ")");
    std::vector<PartitionSet> sets;
    try {
      if (n == 1) {
        std::vector<std::int64_t> id;
        for (auto t = T0; t < T1; ++t) id.push_back(t);
        FrequencyMap m(half_integers, half_integers, T0, std::move(id));
        auto cert = measure_discrepancy(m, Rational(1), copt);
        sets.push_back({"Lambda_1", b[0], m, cert, delta, {}});
      } else {
        // stage 1: rounding maps straight into Z+1/2
        RoundingPair p1 = split_pair(b[0], c[0]);
        FrequencyMap Phi = realize(p1.phi, p1.phi.sources_for_targets(T0, T1));
        FrequencyMap Psi = realize(p1.psi, p1.psi.sources_for_targets(T0, T1));
        const long double eps1 = stage_epsilon(1, delta);
        std::int64_t K1 = p1.phi.parity_case() == ParityCase::Irrational ? 16 : p1.period;
        AvdoninCertificate cPhi, cPsi;
        for (;; K1 *= 2) {
          if (K1 > opt.max_K) {
            StageReport r;
            r.K = K1;
            r.Phi_cert = cPhi;
            r.Psi_cert = cPsi;
            throw BudgetMiss("stage 1: rounding certificates above " + fmt(eps1) + " up to K=" + std::to_string(K1), r);
          }
          cPhi = measure_discrepancy(Phi, Rational(K1), copt);
          cPsi = measure_discrepancy(Psi, Rational(K1), copt);
          if (cPhi.epsilon_hat <= eps1 && cPsi.epsilon_hat <= eps1) break;
        }
        log.push_back("stage 1: " + std::string(to_string(p1.phi.parity_case())) + ", period " +
                      std::to_string(p1.period) + ", K=R=" + std::to_string(K1) + ", eps " +
                      fmt(cPhi.epsilon_hat) + "/" + fmt(cPsi.epsilon_hat) + " <= " + fmt(eps1));
        sets.push_back({"Lambda_1", b[0], Phi, cPhi, eps1, {}});
        long double psi_budget = eps1;
        for (int s = 2; s <= n - 1; ++s) {
          RoundingPair p = split_pair(b[static_cast<std::size_t>(s - 1)], c[static_cast<std::size_t>(s - 1)]);
          const long double eps_s = stage_epsilon(s, delta);
          StageResult st = compose_and_certify(p, Psi, eps_s, psi_budget, sopt);
          for (const auto& line : st.report.log) log.push_back("stage " + std::to_string(s) + ": " + line);
          psi_budget = (1 - std::ldexp(1.0L, -s)) * delta;
          sets.push_back({"Lambda_" + std::to_string(s), b[static_cast<std::size_t>(s - 1)], st.Phi,
                          st.report.Phi_cert, psi_budget, {}});
          Psi = st.Psi;
          cPsi = st.report.Psi_cert;
        }
        sets.push_back({"Lambda_" + std::to_string(n), b.back(), Psi, cPsi, psi_budget, {}});
      }
      if (spec.has_tail) sets.back().label = "tail";

      // disjointness everywhere, exact cover on the requested window
      IndexRange wr = half_integers.index_range(window);
      std::vector<std::uint8_t> hits(static_cast<std::size_t>(wr.size()), 0);
      std::vector<std::int64_t> seen;
      for (const auto& s : sets)
        for (auto t : s.map.targets()) {
          seen.push_back(t);
          if (wr.contains(t)) ++hits[static_cast<std::size_t>(t - wr.first)];
        }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end())
        throw std::logic_error("constructed sets are not disjoint");
      if (std::any_of(hits.begin(), hits.end(), [](auto h) { return h != 1; }))
        throw WindowTooSmall("sets do not cover the window; enlarging the working region");
    } catch (const WindowTooSmall& e) {
      res.log.insert(res.log.end(), log.begin(), log.end());
      res.log.push_back(std::string("retry: ") + e.what());
      if (attempt >= opt.max_retries) throw;
      continue;
    }
    res.log.insert(res.log.end(), log.begin(), log.end());
    for (auto& s : sets) s.riesz = check_riesz_hypothesis(s.cert, s.length);
    res.sets = std::move(sets);
    break;
  }

  std::vector<std::vector<int>> Js = opt.unions;
  if (Js.empty() && n <= 6) Js = all_unions(n, res.K);
  for (auto J : Js) {
    std::sort(J.begin(), J.end());
    if (J.empty() || J.front() < 1 || J.back() > n || std::adjacent_find(J.begin(), J.end()) != J.end())
      throw std::invalid_argument("union index set out of range");
    std::vector<FrequencyMap> maps;
    std::vector<ExactScalar> lens;
    ExactScalar minR = Rational(1);
    for (int j : J) {
      const auto& s = res.sets[static_cast<std::size_t>(j - 1)];
      maps.push_back(s.map);
      lens.push_back(s.length);
      if (less(minR, s.cert.R)) minR = s.cert.R;
    }
    UnionOptions uo;
    uo.min_R = minR;
    uo.cert = copt;
    const long double budget = pow4(static_cast<int>(J.size()) - 1) * delta;
    uo.target = budget;
    UnionOutcome u = combine_union(maps, lens, uo);
    std::string name = "union {";
    for (std::size_t i = 0; i < J.size(); ++i) name += (i ? "," : "") + std::to_string(J[i]);
    name += "}";
    for (const auto& line : u.log) res.log.push_back(name + ": " + line);
    UnionResult ur{J, u.length, u.map, u.cert, budget, check_riesz_hypothesis(u.cert, u.length)};
    res.unions.push_back(std::move(ur));
  }
  return res;
}

namespace {
FrequencyMap shifted(const FrequencyMap& m, const ExactScalar& by) {
  const auto& t = m.target();
  return m.with_target(AffineLattice(t.a(), t.alpha() + t.a() * by));
}
}  // namespace

PartitionResult shift_to_integers(PartitionResult r) {
  if (r.shifted) return r;
  for (auto& s : r.sets) s.map = shifted(s.map, Rational(-1, 2));
  for (auto& u : r.unions) u.map = shifted(u.map, Rational(-1, 2));
  if (r.window) r.window = Window(r.window->lo - Rational(1, 2), r.window->hi - Rational(1, 2));
  r.shifted = true;
  return r;
}

PartitionResult shift_to_half_integers(PartitionResult r) {
  if (!r.shifted) return r;
  for (auto& s : r.sets) s.map = shifted(s.map, Rational(1, 2));
  for (auto& u : r.unions) u.map = shifted(u.map, Rational(1, 2));
  if (r.window) r.window = Window(r.window->lo + Rational(1, 2), r.window->hi + Rational(1, 2));
  r.shifted = false;
  return r;
}

}  // namespace rieszpart
