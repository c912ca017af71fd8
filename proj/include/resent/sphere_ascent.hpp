#pragma once

// Multi-start maximization of a scale-invariant objective on the unit sphere.
//
// The objectives handled here (singular-value combinations) have concave
// kinks wherever a trailing singular value reaches zero, and maxima usually
// sit on them. Each restart therefore runs quasi-Newton (BFGS) ascent on a
// smoothed objective, tightening the smoothing width along a fixed schedule,
// then reports the unsmoothed value at the final point. Objectives may supply
// their own gradient; otherwise central differences are used.

#include <resent/types.hpp>

#include <type_traits>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <random>
#include <vector>

namespace resent {

struct OptimizerConfig {
  int restarts = 32;
  int max_iter = 1000;          // per smoothing stage
  double tol = 1e-10;           // required gain over `window` iterations
  int window = 10;
  std::uint64_t seed = 0;       // restart k draws its start from seed + k
  double fd_step = 1e-6;        // only for objectives without a gradient
  std::vector<double> smoothing = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8};

  friend bool operator==(const OptimizerConfig&, const OptimizerConfig&) = default;
};

struct AscentResult {
  RVector x;               // unit vector
  double value = -std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  int restart = -1;
};

namespace detail {

template <class Objective>
RVector central_gradient(const Objective& f, const RVector& x, double mu, double h) {
  RVector g(x.size());
  RVector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double saved = probe(i);
    probe(i) = saved + h;
    const double up = f(probe, mu);
    probe(i) = saved - h;
    const double down = f(probe, mu);
    probe(i) = saved;
    g(i) = (up - down) / (2.0 * h);
  }
  return g;
}

/// Objective value, and its gradient in `grad` when non-null. Callables of
/// the form f(x, mu, RVector* grad) fill the gradient themselves.
template <class Objective>
double evaluate(const Objective& f, const RVector& x, double mu, RVector* grad, double h) {
  if constexpr (std::is_invocable_r_v<double, const Objective&, const RVector&, double, RVector*>) {
    return f(x, mu, grad);
  } else {
    if (grad) *grad = central_gradient(f, x, mu, h);
    return f(x, mu);
  }
}

/// One BFGS ascent stage at fixed smoothing `mu`. `x` stays on the unit sphere.
/// Returns true when the stage stopped on its own criterion rather than the cap.
template <class Objective>
bool bfgs_stage(const Objective& f, RVector& x, double mu, const OptimizerConfig& cfg,
                int& iterations) {
  const Eigen::Index n = x.size();
  RMatrix h_inv = RMatrix::Identity(n, n);
  RVector g;
  double fx = evaluate(f, x, mu, &g, cfg.fd_step);
  std::deque<double> history{fx};

  for (int it = 0; it < cfg.max_iter; ++it) {
    ++iterations;
    if (g.norm() < 1e-13) return true;

    RVector p = h_inv * g;
    if (p.dot(g) <= 0.0) {
      h_inv.setIdentity();
      p = g;
    }

    bool accepted = false;
    RVector xn;
    double fn = fx;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      const double slope = g.dot(p);
      for (double t = 1.0; t > 1e-14; t *= 0.5) {
        xn = x + t * p;
        xn.normalize();
        fn = evaluate(f, xn, mu, nullptr, cfg.fd_step);
        if (fn >= fx + 1e-4 * t * slope) {
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        // Retry once along the raw gradient before declaring stationarity.
        if (h_inv.isIdentity()) break;
        h_inv.setIdentity();
        p = g;
      }
    }
    if (!accepted) return true;

    RVector gn;
    (void)evaluate(f, xn, mu, &gn, cfg.fd_step);
    const RVector s = xn - x;
    const RVector y = g - gn;  // ascent: curvature of -f
    const double sy = s.dot(y);
    if (sy > 1e-300) {
      const double rho = 1.0 / sy;
      const RVector hy = h_inv * y;
      h_inv += (rho * rho * y.dot(hy) + rho) * (s * s.transpose()) -
               rho * (hy * s.transpose() + s * hy.transpose());
    }
    x = xn;
    g = gn;
    fx = fn;

    history.push_back(fx);
    if (static_cast<int>(history.size()) > cfg.window) {
      if (history.back() - history.front() < cfg.tol) return true;
      history.pop_front();
    }
  }
  return false;
}

}  // namespace detail

/// Maximizes `f(x, mu)` or `f(x, mu, grad)` (x a unit vector of length `dim`, mu the smoothing
/// width, mu = 0 is the exact objective). Ties between restarts go to the
/// lowest restart index, so adding restarts never lowers the result.
template <class Objective>
AscentResult maximize_on_sphere(const Objective& f, Eigen::Index dim,
                                const OptimizerConfig& cfg) {
  if (dim < 1) throw InvalidArgument("maximize_on_sphere: empty domain");
  if (cfg.restarts < 1) throw InvalidArgument("maximize_on_sphere: restarts must be >= 1");
  AscentResult best;
  for (int k = 0; k < cfg.restarts; ++k) {
    std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(k));
    std::normal_distribution<double> normal(0.0, 1.0);
    RVector x(dim);
    for (Eigen::Index i = 0; i < dim; ++i) x(i) = normal(rng);
    x.normalize();

    int iterations = 0;
    bool converged = true;
    for (double mu : cfg.smoothing) converged = detail::bfgs_stage(f, x, mu, cfg, iterations);
    if (cfg.smoothing.empty()) converged = detail::bfgs_stage(f, x, 0.0, cfg, iterations);

    const double value = detail::evaluate(f, x, 0.0, nullptr, cfg.fd_step);
    if (value > best.value) {
      best.x = x;
      best.value = value;
      best.converged = converged;
      best.iterations = iterations;
      best.restart = k;
    }
  }
  return best;
}

}  // namespace resent
