#include "argocast/solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "argocast/errors.hpp"

namespace argocast::solver {

namespace {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

// Weighted-standardized view of a regression problem. Weights are
// normalized to unit sum; active columns are scaled to weighted mean 0,
// weighted variance 1; y is centered at its weighted mean.
struct Standardized {
  Eigen::VectorXd wn;
  Eigen::MatrixXd Z;
  Eigen::VectorXd yc;
  Eigen::VectorXd mean;
  Eigen::VectorXd sd;
  Eigen::VectorXd col_norm;  // sum_t wn_t z_tj^2 (1 up to rounding)
  std::vector<char> active;
  double ybar = 0.0;
};

Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                         const WeightVector& w) {
  const long n = X.rows();
  const long p = X.cols();
  if (y.size() != n) throw ShapeError("target length does not match row count");
  if (w.w.size() != n) throw ShapeError("weight length does not match row count");
  if (!X.allFinite() || !y.allFinite() || !w.w.allFinite()) {
    throw ValidationError("non-finite input to solver");
  }
  if ((w.w.array() <= 0.0).any()) throw ValidationError("weights must be positive");

  Standardized s;
  s.wn = w.w / w.w.sum();
  s.ybar = s.wn.dot(y);
  s.yc = y.array() - s.ybar;
  s.mean.resize(p);
  s.sd.resize(p);
  s.col_norm.resize(p);
  s.active.assign(static_cast<size_t>(p), 0);
  s.Z = Eigen::MatrixXd::Zero(n, p);

  for (long j = 0; j < p; ++j) {
    const double m = s.wn.dot(X.col(j));
    const Eigen::ArrayXd centered = X.col(j).array() - m;
    const double var = (s.wn.array() * centered.square()).sum();
    const double sd = std::sqrt(std::max(var, 0.0));
    s.mean(j) = m;
    s.sd(j) = sd;
    if (sd > 1e-10 * std::max(1.0, std::abs(m))) {
      s.active[static_cast<size_t>(j)] = 1;
      s.Z.col(j) = centered / sd;
      s.col_norm(j) = (s.wn.array() * s.Z.col(j).array().square()).sum();
    } else {
      s.col_norm(j) = 0.0;
    }
  }
  return s;
}

double penalized_objective(const Standardized& s, const Eigen::VectorXd& b,
                           const Eigen::VectorXd& r, double lambda) {
  return (s.wn.array() * r.array().square()).sum() + lambda * b.lpNorm<1>();
}

double kkt_standardized(const Standardized& s, const Eigen::VectorXd& b, double lambda) {
  const Eigen::VectorXd r = s.yc - s.Z * b;
  double worst = 0.0;
  for (long j = 0; j < b.size(); ++j) {
    if (!s.active[static_cast<size_t>(j)]) continue;
    const double g = 2.0 * (s.wn.array() * s.Z.col(j).array() * r.array()).sum();
    const double v = (b(j) != 0.0) ? std::abs(g - lambda * (b(j) > 0 ? 1.0 : -1.0))
                                   : std::max(0.0, std::abs(g) - lambda);
    worst = std::max(worst, v);
  }
  return worst;
}

struct InnerFit {
  int n_iter = 0;
  bool converged = false;
  std::vector<double> sweep_objectives;
};

// Cyclic coordinate descent on the standardized problem, warm-started
// from the contents of b. Residual r must equal yc - Z b on entry.
InnerFit descend(const Standardized& s, double lambda, const FitOptions& opts, Eigen::VectorXd& b,
                 Eigen::VectorXd& r) {
  InnerFit out;
  const long p = b.size();
  for (int iter = 1; iter <= opts.max_iter; ++iter) {
    double max_update = 0.0;
    for (long j = 0; j < p; ++j) {
      if (!s.active[static_cast<size_t>(j)]) continue;
      const double g = (s.wn.array() * s.Z.col(j).array() * r.array()).sum();
      const double b_new = soft_threshold(b(j) * s.col_norm(j) + g, lambda / 2.0) / s.col_norm(j);
      const double delta = b_new - b(j);
      if (delta != 0.0) {
        r -= delta * s.Z.col(j);
        b(j) = b_new;
      }
      max_update = std::max(max_update, std::abs(delta));
    }
    out.n_iter = iter;
    if (opts.record_objective) {
      out.sweep_objectives.push_back(penalized_objective(s, b, r, lambda));
#ifndef NDEBUG
      const size_t k = out.sweep_objectives.size();
      if (k >= 2) {
        assert(out.sweep_objectives[k - 1] <=
               out.sweep_objectives[k - 2] + 1e-10 * (1.0 + std::abs(out.sweep_objectives[k - 2])));
      }
#endif
    }
    if (max_update < opts.tol) {
      if (kkt_standardized(s, b, lambda) <= 10.0 * opts.tol) {
        out.converged = true;
        break;
      }
      if (max_update == 0.0) break;  // stuck; report unconverged
    }
  }
  return out;
}

FitResult back_transform(const Standardized& s, const Eigen::VectorXd& b, double lambda) {
  FitResult fit;
  fit.lambda = lambda;
  fit.coefficients = Eigen::VectorXd::Zero(b.size());
  double mean_shift = 0.0;
  for (long j = 0; j < b.size(); ++j) {
    if (!s.active[static_cast<size_t>(j)]) continue;
    fit.coefficients(j) = b(j) / s.sd(j);
    mean_shift += fit.coefficients(j) * s.mean(j);
  }
  fit.intercept = s.ybar - mean_shift;
  return fit;
}

std::vector<std::vector<long>> make_folds(long n, int folds, CvMode mode, std::uint64_t seed) {
  if (folds < 2) throw ValidationError("cross-validation needs at least 2 folds");
  if (n < folds) throw ValidationError("fewer rows than folds");
  if (n / folds < 2) {
    throw ValidationError("degenerate fold: fewer than 2 rows per fold (n=" + std::to_string(n) +
                          ", folds=" + std::to_string(folds) + ")");
  }
  std::vector<long> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0L);
  if (mode == CvMode::Random) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<std::vector<long>> out(static_cast<size_t>(folds));
  const long base = n / folds;
  const long extra = n % folds;
  long pos = 0;
  for (int f = 0; f < folds; ++f) {
    const long len = base + (f < extra ? 1 : 0);
    for (long i = 0; i < len; ++i) out[static_cast<size_t>(f)].push_back(order[pos++]);
  }
  return out;
}

}  // namespace

WeightVector decay_weights(int n, double omega) {
  if (n < 1) throw ValidationError("decay_weights: n must be >= 1");
  if (omega <= 0.0 || omega > 1.0) throw ValidationError("decay_weights: omega must be in (0, 1]");
  WeightVector out;
  out.w.resize(n);
  for (int i = 0; i < n; ++i) out.w(i) = std::pow(omega, n - i);
  return out;
}

FitResult fit_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const WeightVector& w, double lambda, const FitOptions& opts) {
  if (lambda < 0.0) throw ValidationError("lambda must be >= 0");
  const Standardized s = standardize(X, y, w);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(X.cols());
  Eigen::VectorXd r = s.yc;
  const InnerFit inner = descend(s, lambda, opts, b, r);
  FitResult fit = back_transform(s, b, lambda);
  fit.n_iter = inner.n_iter;
  fit.converged = inner.converged;
  fit.sweep_objectives = inner.sweep_objectives;
  return fit;
}

double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightVector& w,
                    double lambda, const FitResult& fit) {
  if (fit.coefficients.size() != X.cols()) throw ShapeError("fit does not match design shape");
  const Standardized s = standardize(X, y, w);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(X.cols());
  for (long j = 0; j < X.cols(); ++j) {
    if (s.active[static_cast<size_t>(j)]) b(j) = fit.coefficients(j) * s.sd(j);
  }
  return kkt_standardized(s, b, lambda);
}

double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightVector& w) {
  const Standardized s = standardize(X, y, w);
  double best = 0.0;
  for (long j = 0; j < X.cols(); ++j) {
    if (!s.active[static_cast<size_t>(j)]) continue;
    best = std::max(best, 2.0 * std::abs((s.wn.array() * s.Z.col(j).array() * s.yc.array()).sum()));
  }
  return best;
}

std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const WeightVector& w, int size, double min_ratio) {
  if (size < 1) throw ValidationError("lambda grid size must be >= 1");
  const double top = lambda_max(X, y, w);
  if (top <= 0.0) return {0.0};
  if (size == 1) return {top};
  std::vector<double> grid(static_cast<size_t>(size));
  const double log_top = std::log(top);
  const double log_bot = std::log(top * min_ratio);
  for (int i = 0; i < size; ++i) {
    grid[static_cast<size_t>(i)] = std::exp(log_top + (log_bot - log_top) * i / (size - 1));
  }
  return grid;
}

CvResult cross_validate_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const WeightVector& w, const std::vector<double>& grid, int folds,
                               CvMode mode, std::uint64_t seed, const FitOptions& opts) {
  if (grid.empty()) throw ValidationError("lambda grid is empty");
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] > grid[i - 1]) throw ValidationError("lambda grid must be sorted descending");
  }
  const long n = X.rows();
  const auto fold_rows = make_folds(n, folds, mode, seed);

  std::vector<double> cv_error(grid.size(), 0.0);
  for (const auto& holdout : fold_rows) {
    std::vector<char> held(static_cast<size_t>(n), 0);
    for (long r : holdout) held[static_cast<size_t>(r)] = 1;

    const long n_train = n - static_cast<long>(holdout.size());
    Eigen::MatrixXd Xt(n_train, X.cols());
    Eigen::VectorXd yt(n_train);
    WeightVector wt;
    wt.w.resize(n_train);
    long k = 0;
    for (long r = 0; r < n; ++r) {
      if (held[static_cast<size_t>(r)]) continue;
      Xt.row(k) = X.row(r);
      yt(k) = y(r);
      wt.w(k) = w.w(r);
      ++k;
    }

    const Standardized s = standardize(Xt, yt, wt);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(X.cols());
    Eigen::VectorXd resid = s.yc;
    for (size_t gi = 0; gi < grid.size(); ++gi) {
      descend(s, grid[gi], opts, b, resid);  // warm start along the path
      const FitResult fit = back_transform(s, b, grid[gi]);
      double se = 0.0, wsum = 0.0;
      for (long r : holdout) {
        const double pred = fit.intercept + X.row(r).dot(fit.coefficients);
        se += w.w(r) * (y(r) - pred) * (y(r) - pred);
        wsum += w.w(r);
      }
      cv_error[gi] += se / wsum;
    }
  }

  CvResult out;
  double best = std::numeric_limits<double>::infinity();
  for (size_t gi = 0; gi < grid.size(); ++gi) {
    const double err = cv_error[gi] / static_cast<double>(fold_rows.size());
    out.curve.emplace_back(grid[gi], err);
    if (err < best) {  // strict: ties keep the earlier (larger) lambda
      best = err;
      out.lambda_star = grid[gi];
    }
  }
  return out;
}

double predict(const FitResult& fit, const Eigen::VectorXd& feature_row) {
  if (feature_row.size() != fit.coefficients.size()) {
    throw ShapeError("feature row length " + std::to_string(feature_row.size()) +
                     " does not match fit with " + std::to_string(fit.coefficients.size()) +
                     " coefficients");
  }
  return fit.intercept + fit.coefficients.dot(feature_row);
}

nlohmann::json fit_to_json(const FitResult& fit, const std::vector<std::string>& column_labels) {
  if (static_cast<long>(column_labels.size()) != fit.coefficients.size()) {
    throw ShapeError("label count does not match coefficient count");
  }
  nlohmann::json coeffs = nlohmann::json::array();
  for (long j = 0; j < fit.coefficients.size(); ++j) {
    coeffs.push_back({{"column", column_labels[static_cast<size_t>(j)]},
                      {"value", fit.coefficients(j)}});
  }
  nlohmann::json curve = nlohmann::json::array();
  for (const auto& [lam, err] : fit.cv_curve) curve.push_back({lam, err});
  return nlohmann::json{{"intercept", fit.intercept},
                        {"lambda", fit.lambda},
                        {"converged", fit.converged},
                        {"n_iter", fit.n_iter},
                        {"coefficients", coeffs},
                        {"cv_curve", curve}};
}

}  // namespace argocast::solver
