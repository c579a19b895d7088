#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vendor_json_fwd.hpp"

namespace argocast::solver {

// Exponential decay weights, oldest to newest: (omega^n, ..., omega^2, omega^1).
// The most recent row carries omega^1.
struct WeightVector {
  Eigen::VectorXd w;
};

WeightVector decay_weights(int n, double omega = 0.8);

struct FitOptions {
  double tol = 1e-7;
  int max_iter = 10000;
  // Record the penalized objective after every coordinate-descent sweep.
  bool record_objective = false;
};

// Coefficients of one penalized fit, back-transformed to the original
// column scale. The intercept is estimated without penalty and lives
// outside `coefficients`.
struct FitResult {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  double lambda = 0.0;
  int n_iter = 0;
  bool converged = false;
  std::vector<std::pair<double, double>> cv_curve;  // (lambda, cv error)
  std::vector<double> sweep_objectives;             // filled when record_objective
};

// Minimizes  sum_t w_t (y_t - mu - x_t' beta)^2 / sum_t w_t  +  lambda * ||b||_1
// by cyclic coordinate descent with soft-thresholding, where b are the
// coefficients of the weighted-standardized columns (weighted mean 0,
// weighted variance 1 under the normalized weights). Columns with zero
// weighted variance are pinned to coefficient 0 and skipped. Convergence
// is declared when the largest coordinate update in a sweep drops below
// tol and the KKT residual certifies optimality within 10*tol.
// Never throws on non-convergence; the flag is returned instead.
FitResult fit_weighted_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                             const WeightVector& w, double lambda, const FitOptions& opts = {});

// Maximum violation of the subgradient optimality conditions of the
// standardized problem: |g_j - lambda*sign(b_j)| on active coordinates,
// max(0, |g_j| - lambda) on zero coordinates, with g_j = 2 sum_t w~_t r_t z_tj.
// Recomputes the standardization from scratch, independent of the solver path.
double kkt_residual(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightVector& w,
                    double lambda, const FitResult& fit);

// Smallest penalty that zeroes every coefficient: 2 * max_j |sum_t w~_t z_tj yc_t|.
double lambda_max(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const WeightVector& w);

// Log-spaced grid of `size` values from lambda_max down to min_ratio*lambda_max,
// descending.
std::vector<double> lambda_grid(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                const WeightVector& w, int size = 50, double min_ratio = 1e-4);

enum class CvMode { Blocked, Random };

struct CvResult {
  double lambda_star = 0.0;
  std::vector<std::pair<double, double>> curve;
};

// 10-fold cross-validation over a descending lambda grid with warm starts
// along the path within each fold. Blocked mode keeps folds contiguous in
// time order; Random mode shuffles row-to-fold assignment with the seed.
// The error per fold is the weighted mean squared out-of-fold error;
// fold errors are averaged per lambda and ties break toward larger lambda.
CvResult cross_validate_lambda(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                               const WeightVector& w, const std::vector<double>& grid,
                               int folds = 10, CvMode mode = CvMode::Blocked,
                               std::uint64_t seed = 0, const FitOptions& opts = {});

// Intercept plus dot product; no clipping.
double predict(const FitResult& fit, const Eigen::VectorXd& feature_row);

nlohmann::json fit_to_json(const FitResult& fit, const std::vector<std::string>& column_labels);

}  // namespace argocast::solver
