#pragma once

#include "starcyl/operators.hpp"

namespace starcyl {

using Ladder = std::vector<std::int64_t>;

inline Ladder geometric_ladder(std::int64_t n0, std::int64_t nmax, double ratio = 1.5) {
  if (n0 < 2 || nmax < n0 || ratio <= 1.0) throw std::invalid_argument("bad ladder");
  Ladder out;
  double x = double(n0);
  while (x <= double(nmax)) {
    const auto v = std::int64_t(x);
    if (out.empty() || v != out.back()) out.push_back(v);
    x *= ratio;
  }
  if (out.size() < 3) throw std::invalid_argument("ladder too short");
  return out;
}

// Sorted spectrum with its logarithmic partial sums s(N) = (sum_{k<=N} mu_k)/ln N
// on a ladder, and the extrapolated limit of the fit s(N) = c + a/ln N. The
// fit limit is the Dixmier trace estimate; all generalized limits agree for
// the measurable operators in scope.
struct SpectralSummary {
  RVec values;                  // descending
  Ladder ladder;
  std::vector<double> partial;  // s(N) per ladder rung
  FittedConstant extrapolated;
};

inline SpectralSummary dixmier_from_values(RVec values, const Ladder& ladder,
                                           const std::string& context = "dixmier") {
  std::sort(values.data(), values.data() + values.size(), std::greater<double>());
  SpectralSummary sum;
  sum.values = values;
  std::vector<double> xs, ys;
  RVec csum(values.size());
  double acc = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    acc += values[i];
    csum[i] = acc;
  }
  for (auto N : ladder) {
    if (N < 2 || N > values.size()) continue;
    sum.ladder.push_back(N);
    const double s = csum[N - 1] / std::log(double(N));
    sum.partial.push_back(s);
    xs.push_back(1.0 / std::log(double(N)));
    ys.push_back(s);
  }
  if (xs.size() < 3) throw std::invalid_argument("dixmier: ladder has < 3 usable rungs");
  LineFit f = fit_line(xs, ys);
  sum.extrapolated = FittedConstant{cplx(f.intercept, 0), f.intercept_err, context};
  return sum;
}

// Dixmier trace estimator for a positive semidefinite operator.
inline SpectralSummary dixmier_estimate(const DiscreteOperator& A, const Ladder& ladder) {
  A.check();
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (A.matrix + A.matrix.adjoint()));
  RVec ev = es.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -1e-10 * scale)
    throw std::invalid_argument("dixmier_estimate: spectrum significantly negative");
  return dixmier_from_values(ev.cwiseMax(0.0), ladder);
}

// Partial sums sum_{k<=N} s_k(A)^q of singular values over the ladder;
// exhibits q-Schatten saturation (or its failure) as truncation grows.
inline SpectralSummary schatten_partial(RVec singular_values, double q, const Ladder& ladder) {
  if (q <= 0) throw std::invalid_argument("schatten_partial: q must be > 0");
  std::sort(singular_values.data(), singular_values.data() + singular_values.size(),
            std::greater<double>());
  SpectralSummary sum;
  sum.values = singular_values;
  RVec powed = singular_values.array().pow(q);
  double acc = 0;
  RVec csum(powed.size());
  for (Eigen::Index i = 0; i < powed.size(); ++i) {
    acc += powed[i];
    csum[i] = acc;
  }
  for (auto N : ladder) {
    if (N < 1 || N > powed.size()) continue;
    sum.ladder.push_back(N);
    sum.partial.push_back(csum[N - 1]);
  }
  sum.extrapolated = FittedConstant{cplx(acc, 0), 0.0, "schatten total"};
  return sum;
}

inline SpectralSummary schatten_partial(const DiscreteOperator& A, double q, const Ladder& ladder) {
  Eigen::JacobiSVD<Mat> svd(A.matrix);
  return schatten_partial(svd.singularValues(), q, ladder);
}

}  // namespace starcyl
