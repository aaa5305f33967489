#pragma once

// Shared basics: vector aliases, error type, Gauss-Legendre rules and a
// deterministic parallel loop. Everything else in the library sits on top
// of these.

#include <Eigen/Dense>

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ucplab {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Gauss-Legendre rule on [-1,1]. Nodes by Newton iteration on P_n; rules are
// cached, so repeated lookups are cheap.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline const GaussRule& gauss_legendre(int n) {
  if (n < 1 || n > 128) throw Error("gauss_legendre: order out of range");
  static std::map<int, GaussRule> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-based initial guess, then Newton.
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

// Thread budget: UCPLAB_THREADS caps it, default is the hardware count
// clamped to [1,8].
inline int thread_cap() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  int cap = std::min(hw, 8);
  if (const char* env = std::getenv("UCPLAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) cap = static_cast<int>(std::min<long>(v, 64));
  }
  return cap;
}

// Deterministic parallel loop: the index space is split into fixed chunks and
// each worker writes only to slots owned by its indices, so results do not
// depend on the thread count.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  int nt = thread_cap();
  if (nt <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  nt = static_cast<int>(std::min<std::size_t>(nt, n));
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::exception_ptr err;
  std::mutex err_mu;
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2)
    throw Error("log_spaced: need 0 < lo < hi and n >= 2");
  std::vector<double> out(n);
  double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / (n - 1.0));
  out.front() = lo;
  out.back() = hi;
  return out;
}

// C^2 cutoff: 1 on (-inf, t0], 0 on [t1, inf), quintic blend between.
inline double cutoff_c2(double t, double t0, double t1) {
  if (t <= t0) return 1.0;
  if (t >= t1) return 0.0;
  double s = (t - t0) / (t1 - t0);
  return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

inline double cutoff_c2_deriv(double t, double t0, double t1) {
  if (t <= t0 || t >= t1) return 0.0;
  double s = (t - t0) / (t1 - t0);
  return -30.0 * s * s * (1.0 + s * (s - 2.0)) / (t1 - t0);
}

}  // namespace ucplab
