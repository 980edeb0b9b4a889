#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

#include "roq/error.hpp"
#include "roq/experiments.hpp"

namespace roq {

std::size_t decay_onset(std::span<const double> errors, double threshold) {
  std::size_t onset = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (errors[i] >= threshold) onset = i + 1;
  }
  return onset;
}

DecayFit fit_exponential_decay(std::span<const double> errors, std::size_t n_min) {
  for (double e : errors) {
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("fit_exponential_decay: errors must be positive");
  }
  if (n_min + 3 > errors.size()) {
    throw ArgumentError("fit_exponential_decay: need at least 3 points at or after n_min");
  }
  const std::size_t N = errors.size() - n_min;
  std::vector<double> y(N);
  double ymin = std::numeric_limits<double>::infinity();
  double ymax = -ymin;
  for (std::size_t i = 0; i < N; ++i) {
    y[i] = std::log(errors[n_min + i]);
    ymin = std::min(ymin, y[i]);
    ymax = std::max(ymax, y[i]);
  }
  if (ymax - ymin < 1e-12) {
    throw DegenerateError("fit_exponential_decay: error sequence does not decay");
  }

  struct Solve {
    double a, b, ssr;
  };
  // y = a + b t with t = -k^alpha, k counted from the onset; closed-form regression.
  const auto solve = [&](double alpha) -> Solve {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (std::size_t k = 0; k < N; ++k) {
      const double t = -std::pow(static_cast<double>(k), alpha);
      st += t;
      sy += y[k];
      stt += t * t;
      sty += t * y[k];
    }
    const double n = static_cast<double>(N);
    const double det = n * stt - st * st;
    if (!(std::abs(det) > 0.0)) return {0, 0, std::numeric_limits<double>::infinity()};
    const double b = (n * sty - st * sy) / det;
    const double a = (sy - b * st) / n;
    double ssr = 0;
    for (std::size_t k = 0; k < N; ++k) {
      const double r = y[k] - (a - b * std::pow(static_cast<double>(k), alpha));
      ssr += r * r;
    }
    return {a, b, ssr};
  };

  const int steps = static_cast<int>(std::lround((kFitAlphaMax - kFitAlphaMin) / kFitAlphaStep));
  int best_step = 0;
  double best_ssr = std::numeric_limits<double>::infinity();
  for (int s = 0; s <= steps; ++s) {
    const double ssr = solve(kFitAlphaMin + kFitAlphaStep * s).ssr;
    if (ssr < best_ssr) {
      best_ssr = ssr;
      best_step = s;
    }
  }
  DecayFit best;
  best.at_grid_boundary = best_step == 0 || best_step == steps;
  double alpha = kFitAlphaMin + kFitAlphaStep * best_step;
  if (!best.at_grid_boundary) {
    const auto [x, fx] = boost::math::tools::brent_find_minima(
        [&](double a) { return solve(a).ssr; }, alpha - kFitAlphaStep, alpha + kFitAlphaStep, 40);
    if (fx <= best_ssr) {
      alpha = x;
      best_ssr = fx;
    }
  }
  const Solve fit = solve(alpha);
  best.C = std::exp(fit.a);
  best.c0 = fit.b;
  best.alpha = alpha;
  best.rms_log_residual = std::sqrt(best_ssr / static_cast<double>(N));
  best.n_min = n_min;
  best.points = N;
  return best;
}

}  // namespace roq
