#pragma once

// Finite-section evidence: Gram spectra of exponential systems on an
// interval, projection residuals, Vandermonde frame bounds for unions of
// shifted lattices, and Beurling densities.
//
// None of this proves a Riesz basis. Finite sections only bound the true
// constants from one side; trends over growing truncations are what we report.

#include <complex>
#include <cstdint>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace rieszpart {

struct Interval {
  long double offset = 0;  // I = [offset, offset + length]
  long double length = 1;
};

struct GramEstimate {
  Interval interval;
  std::int64_t n = 0;
  long double lambda_min = 0;
  long double lambda_max = 0;
  long double condition = 0;
};

/// G_{jk} = int_I exp(2 pi i (l_j - l_k) t) dt.
Eigen::MatrixXcd gram_matrix(const std::vector<long double>& freqs, const Interval& I);

/// The n frequencies of a sorted set closest to its centre (0 if it is
/// straddled), ascending. n larger than the set takes everything.
std::vector<long double> centered_truncation(const std::vector<long double>& sorted_freqs, std::int64_t n);

/// Extreme eigenvalues of the Gram matrix of the centred n-truncation.
/// Throws std::invalid_argument on duplicates or n < 2.
GramEstimate gram_bounds(const std::vector<long double>& sorted_freqs, const Interval& I, std::int64_t n);

namespace testfn {
struct Exponential {
  long double omega;  // exp(2 pi i omega t)
};
struct Indicator {
  long double lo, hi;  // 1 on [lo, hi]
};
struct Polynomial {
  std::vector<long double> coeffs;  // sum c_p t^p, degree <= 3
};
}  // namespace testfn
using TestFunction = std::variant<testfn::Exponential, testfn::Indicator, testfn::Polynomial>;

/// <f, e_lambda> on I.
std::complex<long double> inner_product(const TestFunction& f, long double lambda, const Interval& I);
long double norm_squared(const TestFunction& f, const Interval& I);

/// ||f||^2 - ||P f||^2 with P the projection onto span of the truncated
/// exponentials, via an eigen-decomposition pseudo-inverse (relative cutoff
/// 1e-9). Clamped at 0.
long double completeness_residual(const std::vector<long double>& freqs, const Interval& I, const TestFunction& f);

struct VandermondeBounds {
  long double A = 0, B = 0;  // squared extreme singular values of V
  GramEstimate gram;         // truncated E(U_j (N Z + k_j)) on [0, |J|/N]
  bool contained = false;    // lambda_min >= A/N - tol and lambda_max <= B/N + tol
};

/// V = (exp(2 pi i m k_j / N)), m = 0..|J|-1.
VandermondeBounds vandermonde_bounds(std::int64_t N, const std::vector<std::int64_t>& J, std::int64_t truncation = 256,
                                     long double tol = 1e-6L);

struct DensityAtRadius {
  long double r = 0;
  std::int64_t min_count = 0;  // min over points g of #(g, g+r]
  std::int64_t max_count = 0;  // max over points g of #[g, g+r)
  long double d_minus = 0, d_plus = 0;
};

struct DensityReport {
  std::vector<DensityAtRadius> radii;
  long double D_minus = 0, D_plus = 0;  // two-point extrapolation from the two largest radii
};

/// Windowed counts over a finite sorted set: only intervals lying inside
/// [front, back] are counted.
DensityReport beurling_density(const std::vector<long double>& sorted_freqs, const std::vector<long double>& radii);

/// {2n - 1/4}_{n>0} u {2n + 1/4}_{n<0} u {0} and {2n + 3/4}_{n>0} u {2n - 3/4}_{n<0},
/// |n| <= terms: two sets whose union is not a Riesz basis for [0,1].
std::pair<std::vector<long double>, std::vector<long double>> kadec_counterexample(std::int64_t terms);

/// Lambda = 2Z u {2n-1+e}_{n>0} u {2n+1-e}_{n<0}; returns Lambda \ Lambda_0 =
/// {2n}_{n>0} u {2n+1-e}_{n<0} for |n| <= terms (incomplete on [1/2, 1]).
std::vector<long double> extraction_counterexample(std::int64_t terms, long double e);

}  // namespace rieszpart
