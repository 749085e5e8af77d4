#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace starcyl {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using Mat = Eigen::MatrixXcd;
using RMat = Eigen::MatrixXd;

constexpr double pi = 3.14159265358979323846;

inline cplx unit_phase(double arg) { return {std::cos(arg), std::sin(arg)}; }

// A measured or fitted scalar, never an assumed one.
struct FittedConstant {
  cplx value{0.0, 0.0};
  double std_error = 0.0;
  std::string context;
};

// Ordinary least squares y ~ a + b*x with per-coefficient standard errors.
struct LineFit {
  double intercept = 0, slope = 0;
  double intercept_err = 0, slope_err = 0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need >= 2 points of equal length");
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i]; sy += y[i]; sxx += x[i] * x[i]; sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-300) throw std::runtime_error("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = (n * sxy - sx * sy) / det;
  f.intercept = (sxx * sy - sx * sxy) / det;
  double ss = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  const double dof = std::max(n - 2.0, 1.0);
  const double s2 = ss / dof;
  f.slope_err = std::sqrt(s2 * n / det);
  f.intercept_err = std::sqrt(s2 * sxx / det);
  return f;
}

// Hermitian principal square root, eigenvalues floored at `floor_ev`.
inline Mat hermitian_sqrt(const Mat& a, double floor_ev = 0.0) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a);
  if (es.info() != Eigen::Success) throw std::runtime_error("hermitian_sqrt: eig failed");
  RVec ev = es.eigenvalues().cwiseMax(floor_ev);
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() * es.eigenvectors().adjoint();
}

inline double operator_norm_fro(const Mat& a) { return a.norm(); }

// Thread cap from STARCYL_THREADS (default: hardware concurrency).
inline unsigned thread_cap() {
  if (const char* s = std::getenv("STARCYL_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return unsigned(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc ? hc : 1u;
}

// parallel_for over [0, n); results must not depend on the partition.
inline void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body) {
  const unsigned nt = std::min<std::int64_t>(thread_cap(), std::max<std::int64_t>(n, 1));
  if (nt <= 1 || n < 32) {
    for (std::int64_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::int64_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const std::int64_t lo = t * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &body] {
      for (std::int64_t i = lo; i < hi; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

// FNV-1a, used for config hashes in reports.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace starcyl
