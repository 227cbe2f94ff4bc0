#include "rieszpart/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace rieszpart {

namespace {

using cld = std::complex<long double>;
constexpr long double kPi = std::numbers::pi_v<long double>;

// exp(2 pi i x), x reduced mod 1 first
cld cis(long double x) {
  x -= std::nearbyint(x);
  return {std::cos(2 * kPi * x), std::sin(2 * kPi * x)};
}

// int_s^{s+L} exp(2 pi i w t) dt = exp(2 pi i w (s + L/2)) sin(pi w L)/(pi w)
cld exp_integral(long double w, long double s, long double L) {
  if (w == 0) return L;
  long double x = w * L;
  x -= 2 * std::nearbyint(x / 2);
  return cis(w * (s + L / 2)) * (std::sin(kPi * x) / (kPi * w));
}

// J_q = int_0^L u^q exp(c u) du for q = 0..qmax, c = 2 pi i w
std::vector<cld> power_moments(long double w, long double L, int qmax) {
  std::vector<cld> J(static_cast<std::size_t>(qmax) + 1);
  const cld c(0, 2 * kPi * w);
  if (std::abs(c) * L < 1) {
    for (int q = 0; q <= qmax; ++q) {
      cld sum = 0, cm = 1;  // c^m / m!
      long double Lp = std::pow(L, q + 1);
      for (int m = 0; m < 60; ++m) {
        cld term = cm * Lp / static_cast<long double>(q + m + 1);
        sum += term;
        if (std::abs(term) < 1e-22L * (1 + std::abs(sum))) break;
        cm *= c / static_cast<long double>(m + 1);
        Lp *= L;
      }
      J[static_cast<std::size_t>(q)] = sum;
    }
    return J;
  }
  const cld ecl = cis(w * L);
  J[0] = (ecl - 1.0L) / c;
  for (int q = 1; q <= qmax; ++q)
    J[static_cast<std::size_t>(q)] = (std::pow(L, q) * ecl - static_cast<long double>(q) * J[static_cast<std::size_t>(q - 1)]) / c;
  return J;
}

}  // namespace

Eigen::MatrixXcd gram_matrix(const std::vector<long double>& freqs, const Interval& I) {
  const auto n = static_cast<Eigen::Index>(freqs.size());
  Eigen::MatrixXcd G(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    G(j, j) = static_cast<double>(I.length);
    for (Eigen::Index k = j + 1; k < n; ++k) {
      cld v = exp_integral(freqs[static_cast<std::size_t>(j)] - freqs[static_cast<std::size_t>(k)], I.offset, I.length);
      G(j, k) = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
      G(k, j) = std::conj(G(j, k));
    }
  }
  return G;
}

std::vector<long double> centered_truncation(const std::vector<long double>& f, std::int64_t n) {
  const auto size = static_cast<std::int64_t>(f.size());
  if (n >= size) return f;
  std::int64_t mid = size / 2;
  if (!f.empty() && f.front() < 0 && f.back() > 0)
    mid = std::lower_bound(f.begin(), f.end(), 0.0L) - f.begin();
  std::int64_t start = std::clamp<std::int64_t>(mid - n / 2, 0, size - n);
  return {f.begin() + start, f.begin() + start + n};
}

GramEstimate gram_bounds(const std::vector<long double>& sorted_freqs, const Interval& I, std::int64_t n) {
  if (n < 2) throw std::invalid_argument("gram_bounds needs n >= 2");
  auto f = centered_truncation(sorted_freqs, n);
  if (static_cast<std::int64_t>(f.size()) < 2) throw std::invalid_argument("gram_bounds needs at least 2 frequencies");
  if (!std::is_sorted(f.begin(), f.end())) std::sort(f.begin(), f.end());
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) throw std::invalid_argument("duplicate frequency in Gram truncation");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram_matrix(f, I), Eigen::EigenvaluesOnly);
  GramEstimate g;
  g.interval = I;
  g.n = static_cast<std::int64_t>(f.size());
  g.lambda_min = es.eigenvalues().minCoeff();
  g.lambda_max = es.eigenvalues().maxCoeff();
  g.condition = g.lambda_min > 0 ? g.lambda_max / g.lambda_min : std::numeric_limits<long double>::infinity();
  return g;
}

std::complex<long double> inner_product(const TestFunction& f, long double lambda, const Interval& I) {
  if (auto* e = std::get_if<testfn::Exponential>(&f)) return exp_integral(e->omega - lambda, I.offset, I.length);
  if (auto* ind = std::get_if<testfn::Indicator>(&f)) {
    long double lo = std::max(ind->lo, I.offset), hi = std::min(ind->hi, I.offset + I.length);
    if (hi <= lo) return 0;
    return exp_integral(-lambda, lo, hi - lo);
  }
  const auto& P = std::get<testfn::Polynomial>(f).coeffs;
  if (P.size() > 4) throw std::invalid_argument("test polynomials are limited to degree 3");
  const int deg = static_cast<int>(P.size()) - 1;
  if (deg < 0) return 0;
  // P(s + u) in powers of u
  std::vector<long double> d(P.size(), 0);
  for (int p = 0; p <= deg; ++p) {
    long double binom = 1;
    for (int q = 0; q <= p; ++q) {
      d[static_cast<std::size_t>(q)] += P[static_cast<std::size_t>(p)] * binom * std::pow(I.offset, p - q);
      binom = binom * (p - q) / (q + 1);
    }
  }
  auto J = power_moments(-lambda, I.length, deg);
  cld sum = 0;
  for (int q = 0; q <= deg; ++q) sum += d[static_cast<std::size_t>(q)] * J[static_cast<std::size_t>(q)];
  return cis(-lambda * I.offset) * sum;
}

long double norm_squared(const TestFunction& f, const Interval& I) {
  if (std::holds_alternative<testfn::Exponential>(f)) return I.length;
  if (auto* ind = std::get_if<testfn::Indicator>(&f))
    return std::max(0.0L, std::min(ind->hi, I.offset + I.length) - std::max(ind->lo, I.offset));
  const auto& P = std::get<testfn::Polynomial>(f).coeffs;
  std::vector<long double> sq(P.empty() ? 0 : 2 * P.size() - 1, 0);
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = 0; j < P.size(); ++j) sq[i + j] += P[i] * P[j];
  long double a = I.offset, b = I.offset + I.length, total = 0;
  for (std::size_t p = 0; p < sq.size(); ++p)
    total += sq[p] * (std::pow(b, static_cast<long double>(p + 1)) - std::pow(a, static_cast<long double>(p + 1))) / static_cast<long double>(p + 1);
  return total;
}

long double completeness_residual(const std::vector<long double>& freqs, const Interval& I, const TestFunction& f) {
  const auto n = static_cast<Eigen::Index>(freqs.size());
  // H_{jk} = <e_k, e_j>, so H c = b solves the normal equations
  Eigen::MatrixXcd H = gram_matrix(freqs, I).transpose();
  Eigen::VectorXcd b(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    auto v = inner_product(f, freqs[static_cast<std::size_t>(j)], I);
    b(j) = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  const auto& ev = es.eigenvalues();
  const double cutoff = 1e-9 * std::max(ev.maxCoeff(), 0.0);
  Eigen::VectorXcd u = es.eigenvectors().adjoint() * b;
  long double energy = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    if (ev(i) > cutoff) energy += static_cast<long double>(std::norm(u(i)) / ev(i));
  return std::max(0.0L, norm_squared(f, I) - energy);
}

VandermondeBounds vandermonde_bounds(std::int64_t N, const std::vector<std::int64_t>& J, std::int64_t truncation,
                                     long double tol) {
  if (J.empty() || N <= 0) throw std::invalid_argument("vandermonde_bounds needs N > 0 and nonempty J");
  const auto m = static_cast<Eigen::Index>(J.size());
  Eigen::MatrixXcd V(m, m);
  for (Eigen::Index r = 0; r < m; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      auto z = cis(static_cast<long double>(r * J[static_cast<std::size_t>(c)] % N) / static_cast<long double>(N));
      V(r, c) = {static_cast<double>(z.real()), static_cast<double>(z.imag())};
    }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V);
  const auto& s = svd.singularValues();
  VandermondeBounds out;
  out.A = static_cast<long double>(s.minCoeff()) * s.minCoeff();
  out.B = static_cast<long double>(s.maxCoeff()) * s.maxCoeff();
  std::vector<long double> freqs;
  const std::int64_t reps = truncation / m + 2;
  for (std::int64_t n = -reps; n <= reps; ++n)
    for (auto k : J) freqs.push_back(static_cast<long double>(N * n + k));
  std::sort(freqs.begin(), freqs.end());
  out.gram = gram_bounds(freqs, {0, static_cast<long double>(m) / N}, truncation);
  const long double nN = static_cast<long double>(N);
  out.contained = out.gram.lambda_min >= out.A / nN - tol && out.gram.lambda_max <= out.B / nN + tol;
  return out;
}

DensityReport beurling_density(const std::vector<long double>& f, const std::vector<long double>& radii) {
  if (f.size() < 2) throw std::invalid_argument("density needs at least two points");
  DensityReport rep;
  for (long double r : radii) {
    DensityAtRadius d;
    d.r = r;
    d.min_count = std::numeric_limits<std::int64_t>::max();
    std::size_t hi_open = 0, hi_closed = 0;
    bool any = false;
    for (std::size_t i = 0; i < f.size() && f[i] + r <= f.back(); ++i) {
      any = true;
      while (hi_open < f.size() && f[hi_open] < f[i] + r) ++hi_open;      // [g, g+r)
      while (hi_closed < f.size() && f[hi_closed] <= f[i] + r) ++hi_closed;  // (g, g+r]
      d.max_count = std::max<std::int64_t>(d.max_count, static_cast<std::int64_t>(hi_open - i));
      d.min_count = std::min<std::int64_t>(d.min_count, static_cast<std::int64_t>(hi_closed - i - 1));
    }
    if (!any) throw std::invalid_argument("radius larger than the span of the set");
    d.d_minus = static_cast<long double>(d.min_count) / r;
    d.d_plus = static_cast<long double>(d.max_count) / r;
    rep.radii.push_back(d);
  }
  std::vector<DensityAtRadius> by_r = rep.radii;
  std::sort(by_r.begin(), by_r.end(), [](const auto& x, const auto& y) { return x.r < y.r; });
  if (by_r.size() == 1) {
    rep.D_minus = by_r[0].d_minus;
    rep.D_plus = by_r[0].d_plus;
  } else {
    const auto& a = by_r[by_r.size() - 2];
    const auto& b = by_r.back();
    rep.D_minus = static_cast<long double>(b.min_count - a.min_count) / (b.r - a.r);
    rep.D_plus = static_cast<long double>(b.max_count - a.max_count) / (b.r - a.r);
  }
  return rep;
}

std::pair<std::vector<long double>, std::vector<long double>> kadec_counterexample(std::int64_t terms) {
  std::vector<long double> l1{0}, l2;
  for (std::int64_t n = 1; n <= terms; ++n) {
    l1.push_back(2.0L * n - 0.25L);
    l1.push_back(-2.0L * n + 0.25L);
    l2.push_back(2.0L * n + 0.75L);
    l2.push_back(-2.0L * n - 0.75L);
  }
  std::sort(l1.begin(), l1.end());
  std::sort(l2.begin(), l2.end());
  return {l1, l2};
}

std::vector<long double> extraction_counterexample(std::int64_t terms, long double e) {
  std::vector<long double> out;
  for (std::int64_t n = 1; n <= terms; ++n) {
    out.push_back(2.0L * n);
    out.push_back(-2.0L * n + 1 - e);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace rieszpart
