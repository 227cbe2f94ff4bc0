#include "rieszpart/avdonin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rieszpart {

FrequencyMap::FrequencyMap(AffineLattice source, AffineLattice target, std::int64_t first,
                           std::vector<std::int64_t> targets)
    : source_(std::move(source)), target_(std::move(target)), first_(first), targets_(std::move(targets)) {
  std::vector<std::int64_t> sorted = targets_;
  std::sort(sorted.begin(), sorted.end());
  std::int64_t min_gap = std::numeric_limits<std::int64_t>::max();
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      std::ostringstream os;
      os << "frequency map is not injective: target " << target_.point_ld(sorted[i]) << " hit twice";
      throw std::invalid_argument(os.str());
    }
    min_gap = std::min(min_gap, sorted[i] - sorted[i - 1]);
  }
  separation_ = sorted.size() < 2 ? std::numeric_limits<long double>::infinity()
                                  : static_cast<long double>(min_gap) / target_.a().value();
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    auto k = first_ + static_cast<std::int64_t>(i);
    displacement_ = std::max(displacement_, std::fabs(target_.point_ld(targets_[i]) - source_.point_ld(k)));
  }
}

std::vector<std::int64_t> FrequencyMap::sorted_range() const {
  std::vector<std::int64_t> s = targets_;
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<long double> FrequencyMap::range_points() const {
  std::vector<long double> out;
  out.reserve(targets_.size());
  for (auto t : sorted_range()) out.push_back(target_.point_ld(t));
  return out;
}

FrequencyMap FrequencyMap::then(const FrequencyMap& sigma) const {
  if (!(target_ == sigma.source())) throw std::invalid_argument("composition: lattice mismatch");
  std::vector<std::int64_t> out(targets_.size());
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (!sigma.in_domain(targets_[i])) {
      std::ostringstream os;
      os << "composition: intermediate index " << targets_[i] << " outside the outer map's window";
      throw std::out_of_range(os.str());
    }
    out[i] = sigma(targets_[i]);
  }
  return {source_, sigma.target(), first_, std::move(out)};
}

FrequencyMap FrequencyMap::restricted(IndexRange r) const {
  IndexRange d = domain();
  if (r.first < d.first || r.end > d.end || r.end < r.first) throw std::out_of_range("restriction outside domain");
  std::vector<std::int64_t> out(targets_.begin() + (r.first - first_), targets_.begin() + (r.end - first_));
  return {source_, target_, r.first, std::move(out)};
}

namespace {

bool all_rational(const FrequencyMap& m, const ExactScalar& R) {
  return m.source().is_rational() && m.target().is_rational() && R.is_rational();
}

std::optional<IndexRange> complete_block(const FrequencyMap& m, const ExactScalar& R, std::int64_t p) {
  Window w(ExactScalar(Rational(p)) * R, ExactScalar(Rational(p + 1)) * R);
  IndexRange r = m.source().index_range(w);
  IndexRange d = m.domain();
  if (r.first < d.first || r.end > d.end) return std::nullopt;
  return r;
}

struct BlockValue {
  long double sum = 0;
  std::optional<Rational> exact;
};

BlockValue block_value(const FrequencyMap& m, IndexRange r, bool exact) {
  BlockValue v;
  if (exact) {
    __int128 st = 0, sk = 0;
    for (std::int64_t k = r.first; k < r.end; ++k) {
      st += m(k);
      sk += k;
    }
    const auto n = r.size();
    const Rational aT = m.target().a().as_rational(), alT = m.target().alpha().as_rational();
    const Rational aS = m.source().a().as_rational(), alS = m.source().alpha().as_rational();
    Rational s = (Rational::from_wide(st, 1) + Rational(n) * alT) / aT -
                 (Rational::from_wide(sk, 1) + Rational(n) * alS) / aS;
    v.exact = s;
    v.sum = s.to_long_double();
    return v;
  }
  for (std::int64_t k = r.first; k < r.end; ++k) v.sum += m.target().point_ld(m(k)) - m.source().point_ld(k);
  return v;
}

}  // namespace

std::optional<long double> block_sum(const FrequencyMap& m, const ExactScalar& R, std::int64_t p) {
  auto r = complete_block(m, R, p);
  if (!r) return std::nullopt;
  return block_value(m, *r, all_rational(m, R)).sum;
}

AvdoninCertificate measure_discrepancy(const FrequencyMap& m, const ExactScalar& R, const CertificateOptions& opt) {
  if (R.sign() <= 0) throw std::invalid_argument("block length R must be positive");
  if (m.size() == 0) throw WindowTooSmall("empty map");
  const long double Rl = R.value();
  // candidate p range from the domain's extent, then trimmed exactly
  long double lo = m.source().point_ld(m.domain().first - 1);
  long double hi = m.source().point_ld(m.domain().end);
  if (opt.window) {
    lo = std::max(lo, opt.window->lo.value());
    hi = std::min(hi, opt.window->hi.value());
  }
  auto p_lo = static_cast<std::int64_t>(std::floor(lo / Rl)) - 1;
  auto p_hi = static_cast<std::int64_t>(std::floor(hi / Rl)) + 1;
  auto usable = [&](std::int64_t p) {
    if (opt.window) {
      if (less(ExactScalar(Rational(p)) * R, opt.window->lo)) return false;
      if (less(opt.window->hi, ExactScalar(Rational(p + 1)) * R)) return false;
    }
    return complete_block(m, R, p).has_value();
  };
  while (p_lo <= p_hi && !usable(p_lo)) ++p_lo;
  while (p_hi >= p_lo && !usable(p_hi)) --p_hi;
  std::int64_t n = p_hi - p_lo + 1;
  if (n < opt.min_blocks) {
    std::ostringstream os;
    os << "window holds " << std::max<std::int64_t>(n, 0) << " complete blocks of length " << R.str()
       << ", need at least " << opt.min_blocks;
    throw WindowTooSmall(os.str());
  }
  if (n > opt.max_blocks) {
    std::int64_t start = std::clamp<std::int64_t>(-opt.max_blocks / 2, p_lo, p_hi - opt.max_blocks + 1);
    p_lo = start;
    p_hi = start + opt.max_blocks - 1;
  }
  const bool exact = all_rational(m, R);
  AvdoninCertificate cert;
  cert.R = R;
  std::optional<Rational> worst_exact;
  for (std::int64_t p = p_lo; p <= p_hi; ++p) {
    auto r = complete_block(m, R, p);
    BlockValue v = block_value(m, *r, exact);
    long double e = std::fabs(v.sum) / Rl;
    if (exact) {
      Rational ex = v.exact->num() < 0 ? -*v.exact : *v.exact;
      ex = ex / R.as_rational();
      if (!worst_exact || *worst_exact < ex) {
        worst_exact = ex;
        cert.worst_block = p;
      }
      e = ex.to_long_double();
    } else if (e > cert.epsilon_hat || cert.blocks_checked == 0) {
      cert.worst_block = p;
    }
    cert.epsilon_hat = std::max(cert.epsilon_hat, e);
    ++cert.blocks_checked;
  }
  cert.epsilon_exact = worst_exact;
  return cert;
}

RieszCheck check_riesz_hypothesis(const AvdoninCertificate& cert, const ExactScalar& length) {
  if (cert.blocks_checked <= 0) throw std::invalid_argument("map has no certificate (no blocks checked)");
  RieszCheck c;
  c.epsilon_hat = cert.epsilon_hat;
  c.threshold = 1.0L / (4.0L * length.value());
  c.margin = c.threshold - c.epsilon_hat;
  if (cert.epsilon_exact && length.is_rational()) {
    c.pass = *cert.epsilon_exact < Rational(1) / (Rational(4) * length.as_rational());
  } else {
    c.pass = c.epsilon_hat < c.threshold;
  }
  return c;
}

long double measure_equidistribution(const ExactScalar& a, const ExactScalar& alpha, std::int64_t R,
                                     std::int64_t m_lo, std::int64_t m_hi,
                                     const std::function<long double(long double)>& f, long double integral) {
  if (R <= 0 || m_hi < m_lo) throw std::invalid_argument("equidistribution needs R > 0 and a nonempty m range");
  const bool exact = a.is_rational() && alpha.is_rational();
  const long double inv_a = 1.0L / a.value();
  const long double al = alpha.value();
  long double worst = 0;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    long double s = 0;
    for (std::int64_t k = m * R; k < (m + 1) * R; ++k) {
      long double fr;
      if (exact) {
        Rational x = (Rational(k) + alpha.as_rational()) / a.as_rational();
        fr = (x - Rational(x.floor())).to_long_double();
      } else {
        long double x = (static_cast<long double>(k) + al) * inv_a;
        fr = x - std::floor(x);
      }
      s += f ? f(fr) : fr;
    }
    worst = std::max(worst, std::fabs(s / static_cast<long double>(R) - integral));
  }
  return worst;
}

KadecDiagnostic kadec_diagnostic(const FrequencyMap& m) {
  KadecDiagnostic d;
  d.sup_displacement = m.displacement_bound();
  d.bound = 1.0L / (4.0L * m.source().a().value());
  d.within = d.sup_displacement < d.bound;
  return d;
}

}  // namespace rieszpart
