#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "placekit/optim_impl.hpp"

namespace placekit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Hansen-style CMA-ES with cumulative step-size adaptation and rank-1 plus
// rank-mu covariance updates, restricted to a diagonal covariance above 200
// dimensions. Operates on [0,1]^d; sampled points are clamped into the box
// and the update uses the clamped values.
struct CmaEsOptimizer::Impl {
  int dim;
  int lambda, mu;
  VectorXd weights;
  double mu_eff;
  double c_sigma, d_sigma, c_c, c_1, c_mu, chi_n;

  VectorXd mean, p_sigma, p_c;
  MatrixXd C, B;     // full-covariance mode
  VectorXd D;        // eigenvalue sqrt (full) or per-axis stddev (diagonal)
  VectorXd diag_c;   // diagonal mode covariance
  bool diagonal;
  long gen = 0;

  std::vector<VectorXd> sampled;  // normalized clamped samples of last ask

  explicit Impl(int d, int lam, bool diag)
      : dim(d), lambda(lam), diagonal(diag) {
    mu = lambda / 2;
    weights.resize(mu);
    for (int i = 0; i < mu; ++i)
      weights[i] = std::log((lambda + 1) / 2.0) - std::log(i + 1.0);
    weights /= weights.sum();
    mu_eff = 1.0 / weights.squaredNorm();

    c_sigma = (mu_eff + 2.0) / (dim + mu_eff + 5.0);
    d_sigma = 1.0 +
              2.0 * std::max(0.0, std::sqrt((mu_eff - 1.0) / (dim + 1.0)) - 1.0) +
              c_sigma;
    c_c = (4.0 + mu_eff / dim) / (dim + 4.0 + 2.0 * mu_eff / dim);
    c_1 = 2.0 / ((dim + 1.3) * (dim + 1.3) + mu_eff);
    c_mu = std::min(1.0 - c_1, 2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) /
                                   ((dim + 2.0) * (dim + 2.0) + mu_eff));
    chi_n = std::sqrt(static_cast<double>(dim)) *
            (1.0 - 1.0 / (4.0 * dim) + 1.0 / (21.0 * dim * dim));

    mean = VectorXd::Constant(dim, 0.5);
    p_sigma = VectorXd::Zero(dim);
    p_c = VectorXd::Zero(dim);
    if (diagonal) {
      diag_c = VectorXd::Ones(dim);
    } else {
      C = MatrixXd::Identity(dim, dim);
      B = MatrixXd::Identity(dim, dim);
      D = VectorXd::Ones(dim);
    }
  }

  // Refreshes B and D from C; returns false when C is not positive definite.
  bool update_eigensystem() {
    if (diagonal) return (diag_c.array() > 0.0).all() && diag_c.allFinite();
    Eigen::SelfAdjointEigenSolver<MatrixXd> solver(C);
    if (solver.info() != Eigen::Success) return false;
    const VectorXd evals = solver.eigenvalues();
    if (!evals.allFinite() || evals.minCoeff() <= 0.0) return false;
    B = solver.eigenvectors();
    D = evals.cwiseSqrt();
    return true;
  }

  void reset_covariance() {
    p_sigma.setZero();
    p_c.setZero();
    if (diagonal) {
      diag_c.setOnes();
    } else {
      C.setIdentity();
      B.setIdentity();
      D.setOnes();
    }
  }
};

CmaEsOptimizer::CmaEsOptimizer(const Problem& problem,
                               const OptimizerSettings& settings)
    : Optimizer(problem), rng_(settings.seed) {
  dim_ = problem.space.dim();
  if (dim_ < 1) throw ConfigError("es requires dimension >= 1");
  diagonal_ = dim_ > 200;
  const int default_lambda =
      4 + static_cast<int>(std::floor(3.0 * std::log(static_cast<double>(dim_))));
  lambda_ = settings.pop_size.value_or(default_lambda);
  if (lambda_ < 2) throw ConfigError("es population size must be >= 2");
  sigma_ = settings.sigma0;
  if (sigma_ <= 0.0) throw ConfigError("es sigma0 must be > 0");
  impl_ = std::make_shared<Impl>(dim_, lambda_, diagonal_);
  mean_.assign(dim_, 0.5);
}

BoxVector CmaEsOptimizer::denormalize(const std::vector<double>& z) const {
  const SpaceDesc& s = problem_.space;
  BoxVector x(dim_);
  for (int i = 0; i < dim_; ++i) x[i] = s.lo[i] + z[i] * (s.hi[i] - s.lo[i]);
  return x;
}

std::vector<double> CmaEsOptimizer::normalize(const BoxVector& x) const {
  const SpaceDesc& s = problem_.space;
  std::vector<double> z(dim_);
  for (int i = 0; i < dim_; ++i) z[i] = (x[i] - s.lo[i]) / (s.hi[i] - s.lo[i]);
  return z;
}

std::vector<Genotype> CmaEsOptimizer::ask_impl() {
  Impl& s = *impl_;
  s.sampled.clear();
  std::vector<Genotype> batch;
  for (int i = 0; i < lambda_; ++i) {
    VectorXd z(dim_);
    for (int j = 0; j < dim_; ++j) z[j] = rng_.normal();
    VectorXd y = s.diagonal ? VectorXd(s.diag_c.cwiseSqrt().cwiseProduct(z))
                            : VectorXd(s.B * (s.D.cwiseProduct(z)));
    VectorXd x = s.mean + sigma_ * y;
    for (int j = 0; j < dim_; ++j) x[j] = std::clamp(x[j], 0.0, 1.0);
    s.sampled.push_back(x);
    batch.emplace_back(denormalize(std::vector<double>(x.data(), x.data() + dim_)));
  }
  return batch;
}

void CmaEsOptimizer::tell_impl(const std::vector<Genotype>& genotypes,
                               const std::vector<double>& fitnesses) {
  Impl& s = *impl_;
  const int n = static_cast<int>(genotypes.size());
  // Truncated final batches and rank-degenerate generations leave the
  // distribution untouched.
  if (n < lambda_) return;
  const double fmin = *std::min_element(fitnesses.begin(), fitnesses.end());
  const double fmax = *std::max_element(fitnesses.begin(), fitnesses.end());
  if (!(fmax > fmin)) return;

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return fitnesses[a] < fitnesses[b]; });

  const VectorXd old_mean = s.mean;
  VectorXd new_mean = VectorXd::Zero(dim_);
  for (int i = 0; i < s.mu; ++i) {
    // Recover the normalized point; clamped samples update the state too.
    const std::vector<double> z = normalize(std::get<BoxVector>(genotypes[idx[i]]));
    new_mean += s.weights[i] * Eigen::Map<const VectorXd>(z.data(), dim_);
  }
  s.mean = new_mean;
  const VectorXd mean_shift = (s.mean - old_mean) / sigma_;

  // C^{-1/2} * shift for the step-size path.
  VectorXd c_inv_shift;
  if (s.diagonal)
    c_inv_shift = mean_shift.cwiseQuotient(s.diag_c.cwiseSqrt());
  else
    c_inv_shift = s.B * (s.B.transpose() * mean_shift).cwiseQuotient(s.D);

  s.p_sigma = (1.0 - s.c_sigma) * s.p_sigma +
              std::sqrt(s.c_sigma * (2.0 - s.c_sigma) * s.mu_eff) * c_inv_shift;
  ++s.gen;
  const double ps_norm = s.p_sigma.norm();
  const bool h_sigma =
      ps_norm / std::sqrt(1.0 - std::pow(1.0 - s.c_sigma, 2.0 * s.gen)) <
      (1.4 + 2.0 / (dim_ + 1.0)) * s.chi_n;

  s.p_c = (1.0 - s.c_c) * s.p_c +
          (h_sigma ? std::sqrt(s.c_c * (2.0 - s.c_c) * s.mu_eff) : 0.0) *
              mean_shift;

  const double delta_h = (1.0 - (h_sigma ? 1.0 : 0.0)) * s.c_c * (2.0 - s.c_c);
  if (s.diagonal) {
    VectorXd rank_mu = VectorXd::Zero(dim_);
    for (int i = 0; i < s.mu; ++i) {
      const std::vector<double> z = normalize(std::get<BoxVector>(genotypes[idx[i]]));
      const VectorXd y =
          (Eigen::Map<const VectorXd>(z.data(), dim_) - old_mean) / sigma_;
      rank_mu += s.weights[i] * y.cwiseProduct(y);
    }
    s.diag_c = (1.0 - s.c_1 - s.c_mu) * s.diag_c +
               s.c_1 * (s.p_c.cwiseProduct(s.p_c) + delta_h * s.diag_c) +
               s.c_mu * rank_mu;
  } else {
    MatrixXd rank_mu = MatrixXd::Zero(dim_, dim_);
    for (int i = 0; i < s.mu; ++i) {
      const std::vector<double> z = normalize(std::get<BoxVector>(genotypes[idx[i]]));
      const VectorXd y =
          (Eigen::Map<const VectorXd>(z.data(), dim_) - old_mean) / sigma_;
      rank_mu += s.weights[i] * (y * y.transpose());
    }
    s.C = (1.0 - s.c_1 - s.c_mu) * s.C +
          s.c_1 * (s.p_c * s.p_c.transpose() + delta_h * s.C) +
          s.c_mu * rank_mu;
    s.C = 0.5 * (s.C + s.C.transpose());  // keep symmetric
  }

  sigma_ *= std::exp((s.c_sigma / s.d_sigma) * (ps_norm / s.chi_n - 1.0));
  sigma_ = std::clamp(sigma_, 1e-12, 1e6);

  if (!s.update_eigensystem()) {
    s.reset_covariance();
    ++covariance_resets_;
    std::cerr << "[placekit] es: covariance reset to identity at generation "
              << s.gen << "\n";
  }
  mean_.assign(s.mean.data(), s.mean.data() + dim_);
}

}  // namespace placekit
