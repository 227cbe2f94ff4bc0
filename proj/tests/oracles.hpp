#pragma once

// Independent reference computations: plain quadrature and least squares,
// nothing shared with the library's closed forms.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss.hpp>

namespace rieszpart::oracle {

/// ||f - P f||^2 on [lo, lo + len], P the projection onto span exp(2 pi i l t):
/// L^2 discretised by panelled Gauss rules, projection by a rank-revealing solve.
inline double projection_residual(const std::vector<long double>& freqs, double lo, double len,
                                  const std::function<double(double)>& f, int panels = 40) {
  using G = boost::math::quadrature::gauss<double, 30>;
  std::vector<double> t, w;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + len * p / panels, h = len / panels;
    for (std::size_t i = 0; i < G::abscissa().size(); ++i)
      for (int s : {-1, 1}) {
        if (i == 0 && s == -1 && G::abscissa()[0] == 0) continue;
        t.push_back(a + h / 2 * (1 + s * G::abscissa()[i]));
        w.push_back(h / 2 * G::weights()[i]);
      }
  }
  const auto rows = static_cast<Eigen::Index>(t.size()), cols = static_cast<Eigen::Index>(freqs.size());
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd y(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const double sw = std::sqrt(w[static_cast<std::size_t>(i)]), ti = t[static_cast<std::size_t>(i)];
    y(i) = sw * f(ti);
    for (Eigen::Index j = 0; j < cols; ++j)
      A(i, j) = sw * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(freqs[static_cast<std::size_t>(j)]) * ti);
  }
  Eigen::VectorXcd c = A.completeOrthogonalDecomposition().solve(y);
  return (y - A * c).squaredNorm();
}

}  // namespace rieszpart::oracle
