#include "ulelab/specops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ulelab::specops {

namespace {
constexpr double kCheckTol = 1e-10;
constexpr double kInf = std::numeric_limits<double>::infinity();

int argmax_abs(const std::vector<double>& u) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(u.size()); ++i)
    if (std::abs(u[i]) > std::abs(u[best])) best = i;  // strict: leftmost tie wins
  return best;
}
}  // namespace

double OperatorWindow::scale() const {
  double m = 0;
  for (double v : diagonal) m = std::max(m, std::abs(v));
  return m + 2.0 * hopping;
}

OperatorWindow build_window(const sampling::LimitPeriodicSeries& series,
                            const hull::GroupElement& g, std::int64_t offset, int size,
                            double eps, WindowForm form, int k_layers) {
  if (size < 2) throw std::invalid_argument("window size must be >= 2");
  if (form == WindowForm::Standard && eps <= 0)
    throw std::invalid_argument("standard form requires eps > 0");
  if (eps < 0) throw std::invalid_argument("hopping must be nonnegative");
  OperatorWindow w;
  w.offset = offset;
  w.size = size;
  w.form = form;
  w.hopping = form == WindowForm::Poeschel ? eps : 1.0;
  w.diagonal.resize(size);
  for (int j = 0; j < size; ++j)
    w.diagonal[j] = to_double(sampling::evaluate_at(series, g, offset + j, k_layers));
  if (form == WindowForm::Standard)
    for (double& v : w.diagonal) v /= eps;
  return w;
}

OperatorWindow window_from_diagonal(std::vector<double> diagonal, double eps, WindowForm form,
                                    std::int64_t offset) {
  if (diagonal.size() < 2) throw std::invalid_argument("window size must be >= 2");
  if (form == WindowForm::Standard && eps <= 0)
    throw std::invalid_argument("standard form requires eps > 0");
  if (eps < 0) throw std::invalid_argument("hopping must be nonnegative");
  OperatorWindow w;
  w.offset = offset;
  w.size = static_cast<int>(diagonal.size());
  w.form = form;
  w.hopping = form == WindowForm::Poeschel ? eps : 1.0;
  w.diagonal = std::move(diagonal);
  return w;
}

EigenSystem eigensystem(const OperatorWindow& w) {
  int n = w.size;
  Eigen::VectorXd diag = Eigen::Map<const Eigen::VectorXd>(w.diagonal.data(), n);
  Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, w.hopping);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("tridiagonal eigensolver failed to converge");

  EigenSystem out;
  out.hopping = w.hopping;
  out.offset = w.offset;
  out.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  out.vectors.resize(n);
  out.centers.resize(n);
  for (int k = 0; k < n; ++k) {
    out.vectors[k].assign(solver.eigenvectors().col(k).data(),
                          solver.eigenvectors().col(k).data() + n);
    int c = argmax_abs(out.vectors[k]);
    if (out.vectors[k][c] < 0)
      for (double& x : out.vectors[k]) x = -x;
    out.centers[k] = c;
  }

  // Certify the decomposition before handing it out.
  double scale = w.scale();
  double worst_resid = 0;
  for (int k = 0; k < n; ++k) {
    const auto& u = out.vectors[k];
    for (int i = 0; i < n; ++i) {
      double hv = w.diagonal[i] * u[i];
      if (i > 0) hv += w.hopping * u[i - 1];
      if (i + 1 < n) hv += w.hopping * u[i + 1];
      worst_resid = std::max(worst_resid, std::abs(hv - out.eigenvalues[k] * u[i]));
    }
    if (worst_resid > kCheckTol * scale)
      throw std::runtime_error("eigenpair residual too large at index " + std::to_string(k));
  }
  out.residual_bound = worst_resid;

  Eigen::MatrixXd gram = solver.eigenvectors().transpose() * solver.eigenvectors();
  double worst_orth = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
  if (worst_orth > kCheckTol)
    throw std::runtime_error("eigenvector orthonormality check failed");

  return out;
}

MatchReport match_eigenvalues(const EigenSystem& e, const std::vector<double>& targets,
                              int interior_margin) {
  int n = e.size();
  if (static_cast<int>(targets.size()) != n)
    throw std::invalid_argument("targets must cover the window sites");
  if (interior_margin < 0 || 2 * interior_margin >= n)
    throw std::invalid_argument("interior margin out of range");

  MatchReport rep;
  std::vector<int> claims(n, 0);
  for (int k = 0; k < n; ++k) {
    MatchReport::Entry entry;
    entry.vector_index = k;
    entry.center = e.centers[k];
    entry.eigenvalue = e.eigenvalues[k];
    entry.target = targets[entry.center];
    entry.mismatch = std::abs(entry.eigenvalue - entry.target);
    ++claims[entry.center];
    rep.entries.push_back(entry);
  }
  for (int i = 0; i < n; ++i)
    if (claims[i] > 1) rep.collision_sites.push_back(i);

  rep.max_interior_mismatch = 0;
  for (int i = interior_margin; i < n - interior_margin; ++i) {
    ++rep.interior_sites;
    if (claims[i] == 0) ++rep.unmatched_interior;
  }
  for (const auto& entry : rep.entries) {
    if (entry.center < interior_margin || entry.center >= n - interior_margin) continue;
    rep.max_interior_mismatch = std::max(rep.max_interior_mismatch, entry.mismatch);
  }
  if (rep.unmatched_interior > 0) rep.max_interior_mismatch = kInf;
  return rep;
}

std::vector<double> DressedResult::dressed_diagonal() const {
  std::vector<double> d = p;
  if (epsilon > 0)
    for (double& v : d) v *= epsilon;
  return d;
}

DressedResult construct_dressed_potential(const std::vector<double>& d_targets, double eps,
                                          double tol, int max_iter, int interior_margin,
                                          const std::vector<double>* initial) {
  int n = static_cast<int>(d_targets.size());
  if (n < 2) throw std::invalid_argument("need at least two sites");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  if (!(tol > 0)) throw std::invalid_argument("tolerance must be positive");
  if (interior_margin < 0) interior_margin = n / 8;

  DressedResult res;
  res.epsilon = eps;
  if (eps == 0) {
    // The diagonal operator already has the prescribed eigenvalues.
    res.p = d_targets;
    res.converged = true;
    res.final_mismatch = 0;
    return res;
  }

  std::vector<double> targets(n);
  for (int i = 0; i < n; ++i) targets[i] = d_targets[i] / eps;
  res.p = initial ? *initial : targets;
  if (static_cast<int>(res.p.size()) != n)
    throw std::invalid_argument("initial guess has wrong length");

  double damping = 1.0;
  std::vector<double> history;
  for (int s = 0; s <= max_iter; ++s) {
    EigenSystem es = eigensystem(window_from_diagonal(res.p, eps, WindowForm::Standard));
    MatchReport match = match_eigenvalues(es, targets, interior_margin);
    res.trace.push_back({s, match.max_interior_mismatch, damping,
                         static_cast<int>(match.collision_sites.size())});
    res.final_mismatch = match.max_interior_mismatch;
    if (match.max_interior_mismatch <= tol) {
      res.converged = true;
      res.iterations = s;
      return res;
    }
    if (s == max_iter) break;

    history.push_back(match.max_interior_mismatch);
    size_t h = history.size();
    if (h >= 3 && std::isfinite(history[h - 1]) && std::isfinite(history[h - 2]) &&
        std::isfinite(history[h - 3])) {
      double d1 = history[h - 1] - history[h - 2];
      double d2 = history[h - 2] - history[h - 3];
      if (d1 * d2 < 0 && damping > 1.0 / 64.0) damping *= 0.5;
    }

    // One corrective step: each matched site absorbs its eigenvalue error.
    // On collisions the vector with the larger weight at the site wins and
    // each loser moves to its best still-unclaimed site, so transiently
    // hybridized pairs keep driving both of their sites. The fixed point is
    // unchanged: at convergence every center is unique.
    std::vector<int> winner(n, -1);
    std::vector<bool> placed(n, false);
    for (int k = 0; k < n; ++k) {
      int c = es.centers[k];
      if (winner[c] < 0) {
        winner[c] = k;
        placed[k] = true;
      } else if (std::abs(es.vectors[k][c]) > std::abs(es.vectors[winner[c]][c])) {
        placed[winner[c]] = false;
        winner[c] = k;
        placed[k] = true;
      }
    }
    for (int k = 0; k < n; ++k) {
      if (placed[k]) continue;
      int best = -1;
      for (int i = 0; i < n; ++i) {
        if (winner[i] >= 0) continue;
        if (best < 0 || std::abs(es.vectors[k][i]) > std::abs(es.vectors[k][best])) best = i;
      }
      if (best >= 0) winner[best] = k;
    }
    for (int i = 0; i < n; ++i)
      if (winner[i] >= 0)
        res.p[i] += damping * (targets[i] - es.eigenvalues[winner[i]]);
  }
  res.converged = false;
  res.iterations = max_iter;
  return res;
}

double dressed_deviation(const std::vector<double>& p, const std::vector<double>& d_targets,
                         double eps, int interior_margin) {
  if (p.size() != d_targets.size()) throw std::invalid_argument("length mismatch");
  int n = static_cast<int>(p.size());
  if (interior_margin < 0) interior_margin = n / 8;
  if (2 * interior_margin >= n) throw std::invalid_argument("interior margin out of range");
  double worst = 0;
  for (int i = interior_margin; i < n - interior_margin; ++i) {
    double dressed = eps > 0 ? eps * p[i] : p[i];
    worst = std::max(worst, std::abs(dressed - d_targets[i]));
  }
  return worst;
}

}  // namespace ulelab::specops
