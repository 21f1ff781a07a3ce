#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "placekit/optim_impl.hpp"

namespace placekit {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr double kSqrt5 = 2.23606797749978969;
constexpr double kMinNoise = 1e-6;
constexpr double kHalfLog2Pi = 0.9189385332046727;
constexpr int kMaxFitPoints = 400;    // cap on O(n^3) GP fits
constexpr int kCandidates = 1024;
constexpr int kRefineTop = 8;
constexpr int kRestarts = 3;

double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * 3.14159265358979323846);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Matern-5/2 with ARD lengthscales, on squared scaled distance s = r^2.
double matern52(double r) {
  return (1.0 + kSqrt5 * r + 5.0 * r * r / 3.0) * std::exp(-kSqrt5 * r);
}

}  // namespace

double ei_value(double mean, double stddev, double best_observed) {
  if (stddev <= 0.0) return 0.0;
  const double imp = best_observed - mean;
  const double u = imp / stddev;
  return std::max(0.0, imp * norm_cdf(u) + stddev * norm_pdf(u));
}

struct BoOptimizer::Impl {
  int dim;
  Rng rng;
  SpaceDesc space;

  std::vector<VectorXd> xs;  // normalized inputs
  std::vector<double> ys;    // raw fitnesses

  // Kernel hyperparameters (standardized-output space).
  VectorXd log_ls;
  double log_sf2 = 0.0;
  double log_sn2 = std::log(1e-4);

  // Model state, rebuilt by refresh().
  bool model_ready = false;
  std::vector<int> fit_idx;
  MatrixXd train;  // d x m
  VectorXd alpha;
  Eigen::LLT<MatrixXd> chol;
  double y_mean = 0.0, y_std = 1.0;
  double best_standardized = 0.0;
  long fits_done = 0;

  std::vector<VectorXd> pending_design;  // LHS points not yet asked

  Impl(int d, std::uint64_t seed, const SpaceDesc& s)
      : dim(d), rng(seed), space(s), log_ls(VectorXd::Zero(d)) {}

  VectorXd normalize(const BoxVector& x) const {
    VectorXd z(dim);
    for (int i = 0; i < dim; ++i)
      z[i] = (x[i] - space.lo[i]) / (space.hi[i] - space.lo[i]);
    return z;
  }

  BoxVector denormalize(const VectorXd& z) const {
    BoxVector x(dim);
    for (int i = 0; i < dim; ++i)
      x[i] = space.lo[i] + z[i] * (space.hi[i] - space.lo[i]);
    return x;
  }

  double kernel(const VectorXd& a, const VectorXd& b) const {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
      const double d = (a[i] - b[i]) / std::exp(log_ls[i]);
      s += d * d;
    }
    return std::exp(log_sf2) * matern52(std::sqrt(s));
  }

  // Subset used for fitting: everything up to the cap, then the best plus a
  // seeded sample of the rest.
  void choose_fit_subset() {
    const int n = static_cast<int>(xs.size());
    fit_idx.resize(n);
    std::iota(fit_idx.begin(), fit_idx.end(), 0);
    if (n <= kMaxFitPoints) return;
    std::vector<int> by_fitness = fit_idx;
    std::stable_sort(by_fitness.begin(), by_fitness.end(),
                     [&](int a, int b) { return ys[a] < ys[b]; });
    const int keep_best = kMaxFitPoints / 4;
    std::vector<int> rest(by_fitness.begin() + keep_best, by_fitness.end());
    Rng sub = rng.fork(0xb0);
    sub.shuffle(rest);
    fit_idx.assign(by_fitness.begin(), by_fitness.begin() + keep_best);
    fit_idx.insert(fit_idx.end(), rest.begin(),
                   rest.begin() + (kMaxFitPoints - keep_best));
    std::sort(fit_idx.begin(), fit_idx.end());
  }

  MatrixXd kernel_matrix() const {
    const int m = static_cast<int>(fit_idx.size());
    MatrixXd K(m, m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j <= i; ++j) {
        const double v = kernel(train.col(i), train.col(j));
        K(i, j) = v;
        K(j, i) = v;
      }
      K(i, i) += std::exp(log_sn2) + 1e-10;
    }
    return K;
  }

  VectorXd standardized_targets() const {
    const int m = static_cast<int>(fit_idx.size());
    VectorXd y(m);
    for (int i = 0; i < m; ++i) y[i] = (ys[fit_idx[i]] - y_mean) / y_std;
    return y;
  }

  // Log marginal likelihood and its gradient wrt (log_ls, log_sf2, log_sn2).
  double log_ml(VectorXd* grad) {
    const int m = static_cast<int>(fit_idx.size());
    MatrixXd K = kernel_matrix();
    Eigen::LLT<MatrixXd> llt(K);
    if (llt.info() != Eigen::Success) {
      if (grad) grad->setZero();
      return -std::numeric_limits<double>::infinity();
    }
    const VectorXd y = standardized_targets();
    const VectorXd a = llt.solve(y);
    double logdet = 0.0;
    for (int i = 0; i < m; ++i) logdet += std::log(llt.matrixL()(i, i));
    const double ml = -0.5 * y.dot(a) - logdet - m * kHalfLog2Pi;
    if (!grad) return ml;

    // d(logML)/dtheta = 0.5 tr((aa' - K^{-1}) dK/dtheta)
    MatrixXd K_inv = llt.solve(MatrixXd::Identity(m, m));
    MatrixXd W = a * a.transpose() - K_inv;
    grad->setZero();
    const double sf2 = std::exp(log_sf2), sn2 = std::exp(log_sn2);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        const double w = W(i, j);
        if (i == j) {
          (*grad)[dim] += 0.5 * w * sf2;  // kernel(i,i) = sf2 at r=0
          (*grad)[dim + 1] += 0.5 * w * sn2;
          continue;
        }
        double s = 0.0;
        VectorXd d2(dim);
        for (int q = 0; q < dim; ++q) {
          const double dq = (train(q, i) - train(q, j)) / std::exp(log_ls[q]);
          d2[q] = dq * dq;
          s += d2[q];
        }
        const double r = std::sqrt(s);
        const double e = std::exp(-kSqrt5 * r);
        const double k_val = sf2 * matern52(r);
        (*grad)[dim] += 0.5 * w * k_val;
        if (r > 0.0) {
          // dk/dlog_ls_q = sf2 * e * (5/3)(1 + sqrt5 r) * d2_q
          const double common = sf2 * e * (5.0 / 3.0) * (1.0 + kSqrt5 * r);
          for (int q = 0; q < dim; ++q)
            (*grad)[q] += 0.5 * w * common * d2[q];
        }
      }
    }
    return ml;
  }

  void clamp_hypers() {
    for (int i = 0; i < dim; ++i)
      log_ls[i] = std::clamp(log_ls[i], std::log(0.01), std::log(10.0));
    log_sf2 = std::clamp(log_sf2, std::log(1e-4), std::log(1e4));
    log_sn2 = std::clamp(log_sn2, std::log(kMinNoise), std::log(1e-1));
  }

  void fit_hyperparameters() {
    struct Candidate {
      VectorXd log_ls;
      double log_sf2, log_sn2, ml;
    };
    std::vector<Candidate> results;
    for (int restart = 0; restart < kRestarts; ++restart) {
      Rng r = rng.fork(1000 + restart + fits_done * 17);
      if (restart == 0) {
        log_ls.setConstant(std::log(0.3));
      } else {
        for (int i = 0; i < dim; ++i)
          log_ls[i] = std::log(r.uniform(0.05, 2.0));
      }
      log_sf2 = 0.0;
      log_sn2 = std::log(1e-4);

      // Adam ascent on the marginal likelihood.
      const int n_params = dim + 2;
      VectorXd m = VectorXd::Zero(n_params), v = VectorXd::Zero(n_params);
      VectorXd grad(n_params);
      double best_ml = -std::numeric_limits<double>::infinity();
      Candidate best{log_ls, log_sf2, log_sn2, best_ml};
      const double lr = 0.08, b1 = 0.9, b2 = 0.999;
      for (int step = 1; step <= 60; ++step) {
        const double ml = log_ml(&grad);
        if (ml > best_ml) {
          best_ml = ml;
          best = {log_ls, log_sf2, log_sn2, ml};
        }
        if (!std::isfinite(ml)) break;
        m = b1 * m + (1.0 - b1) * grad;
        v = b2 * v + (1.0 - b2) * VectorXd(grad.cwiseProduct(grad));
        const double bc1 = 1.0 - std::pow(b1, step);
        const double bc2 = 1.0 - std::pow(b2, step);
        for (int p = 0; p < n_params; ++p) {
          const double upd = lr * (m[p] / bc1) / (std::sqrt(v[p] / bc2) + 1e-8);
          if (p < dim) log_ls[p] += upd;
          else if (p == dim) log_sf2 += upd;
          else log_sn2 += upd;
        }
        clamp_hypers();
      }
      results.push_back(best);
    }
    const auto it = std::max_element(
        results.begin(), results.end(),
        [](const Candidate& a, const Candidate& b) { return a.ml < b.ml; });
    log_ls = it->log_ls;
    log_sf2 = it->log_sf2;
    log_sn2 = it->log_sn2;
    ++fits_done;
  }

  // Rebuilds the training matrix, optionally refits hyperparameters, and
  // recomputes the Cholesky factor.
  void refresh(bool refit) {
    const int n = static_cast<int>(xs.size());
    if (n == 0) {
      model_ready = false;
      return;
    }
    choose_fit_subset();
    const int m = static_cast<int>(fit_idx.size());
    train.resize(dim, m);
    for (int i = 0; i < m; ++i) train.col(i) = xs[fit_idx[i]];

    double mean = 0.0;
    for (int i : fit_idx) mean += ys[i];
    mean /= m;
    double var = 0.0;
    for (int i : fit_idx) var += (ys[i] - mean) * (ys[i] - mean);
    y_mean = mean;
    y_std = m > 1 ? std::sqrt(var / (m - 1)) : 1.0;
    if (y_std < 1e-12) {
      model_ready = false;  // constant observations
      return;
    }
    if (refit) fit_hyperparameters();

    MatrixXd K = kernel_matrix();
    chol.compute(K);
    double jitter = 1e-8;
    while (chol.info() != Eigen::Success && jitter < 1.0) {
      K.diagonal().array() += jitter;
      chol.compute(K);
      jitter *= 10.0;
    }
    if (chol.info() != Eigen::Success) {
      model_ready = false;
      return;
    }
    alpha = chol.solve(standardized_targets());
    best_standardized =
        (*std::min_element(ys.begin(), ys.end()) - y_mean) / y_std;
    model_ready = true;
  }

  // Latent (noise-free) posterior.
  void posterior_standardized(const VectorXd& z, double& mu, double& var) const {
    const int m = static_cast<int>(fit_idx.size());
    VectorXd k_star(m);
    for (int i = 0; i < m; ++i) k_star[i] = kernel(z, train.col(i));
    mu = k_star.dot(alpha);
    const VectorXd w = chol.solve(k_star);
    var = std::max(0.0, std::exp(log_sf2) - k_star.dot(w));
  }

  double ei_standardized(const VectorXd& z) const {
    double mu, var;
    posterior_standardized(z, mu, var);
    return ei_value(mu, std::sqrt(var), best_standardized);
  }

  // argmax EI over seeded uniform candidates, refined from the top few by
  // compass search with step halving.
  VectorXd maximize_ei(Rng& ask_rng) {
    struct Scored {
      VectorXd z;
      double ei;
    };
    std::vector<Scored> top;
    for (int c = 0; c < kCandidates; ++c) {
      VectorXd z(dim);
      for (int i = 0; i < dim; ++i) z[i] = ask_rng.uniform01();
      const double e = ei_standardized(z);
      top.push_back({z, e});
    }
    std::stable_sort(top.begin(), top.end(),
                     [](const Scored& a, const Scored& b) { return a.ei > b.ei; });
    top.resize(std::min<std::size_t>(kRefineTop, top.size()));
    for (Scored& s : top) {
      double step = 0.05;
      while (step > 1e-4) {
        bool improved = false;
        for (int i = 0; i < dim; ++i) {
          for (double sign : {1.0, -1.0}) {
            VectorXd z = s.z;
            z[i] = std::clamp(z[i] + sign * step, 0.0, 1.0);
            const double e = ei_standardized(z);
            if (e > s.ei) {
              s.z = z;
              s.ei = e;
              improved = true;
            }
          }
        }
        if (!improved) step *= 0.5;
      }
    }
    const auto it = std::max_element(
        top.begin(), top.end(),
        [](const Scored& a, const Scored& b) { return a.ei < b.ei; });
    return it->z;
  }

  void build_initial_design() {
    const int n = 2 * dim + 1;  // Latin hypercube
    std::vector<std::vector<int>> strata(dim);
    for (int q = 0; q < dim; ++q) {
      strata[q].resize(n);
      std::iota(strata[q].begin(), strata[q].end(), 0);
      rng.shuffle(strata[q]);
    }
    for (int i = 0; i < n; ++i) {
      VectorXd z(dim);
      for (int q = 0; q < dim; ++q)
        z[q] = (strata[q][i] + rng.uniform01()) / n;
      pending_design.push_back(z);
    }
  }
};

BoOptimizer::BoOptimizer(const Problem& problem,
                         const OptimizerSettings& settings)
    : Optimizer(problem) {
  const int d = problem.space.dim();
  if (d < 1) throw ConfigError("bo requires dimension >= 1");
  impl_ = std::make_unique<Impl>(d, settings.seed, problem.space);
  impl_->build_initial_design();
}

BoOptimizer::~BoOptimizer() = default;

std::vector<Genotype> BoOptimizer::ask_impl() {
  Impl& s = *impl_;
  if (!s.pending_design.empty()) {
    std::vector<Genotype> batch;
    for (const VectorXd& z : s.pending_design)
      batch.emplace_back(s.denormalize(z));
    s.pending_design.clear();
    return batch;
  }
  Rng ask_rng = s.rng.fork(0xa5c + evaluations());
  if (!s.model_ready) {
    // Constant observations or a failed factorization: uniform fallback.
    ++fallback_events_;
    std::cerr << "[placekit] bo: degenerate model, falling back to uniform "
                 "sampling at evaluation "
              << evaluations() << "\n";
    VectorXd z(s.dim);
    for (int i = 0; i < s.dim; ++i) z[i] = ask_rng.uniform01();
    return {Genotype(s.denormalize(z))};
  }
  return {Genotype(s.denormalize(s.maximize_ei(ask_rng)))};
}

void BoOptimizer::tell_impl(const std::vector<Genotype>& genotypes,
                            const std::vector<double>& fitnesses) {
  Impl& s = *impl_;
  for (std::size_t i = 0; i < genotypes.size(); ++i) {
    s.xs.push_back(s.normalize(std::get<BoxVector>(genotypes[i])));
    s.ys.push_back(fitnesses[i]);
  }
  // Refit hyperparameters right after the initial design, then every 10
  // observations; in between only the Cholesky factor is refreshed.
  const long n = static_cast<long>(s.xs.size());
  const bool refit = s.fits_done == 0 || n % 10 == 0;
  s.refresh(refit);
}

std::pair<double, double> BoOptimizer::posterior(const BoxVector& x) const {
  const Impl& s = *impl_;
  if (!s.model_ready) throw ProtocolError("bo posterior requires a fitted model");
  double mu, var;
  s.posterior_standardized(s.normalize(x), mu, var);
  return {s.y_mean + s.y_std * mu, s.y_std * std::sqrt(var)};
}

double BoOptimizer::expected_improvement(const BoxVector& x) const {
  const Impl& s = *impl_;
  if (!s.model_ready) throw ProtocolError("bo EI requires a fitted model");
  return s.ei_standardized(s.normalize(x));
}

}  // namespace placekit
