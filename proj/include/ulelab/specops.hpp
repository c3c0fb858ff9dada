#pragma once

#include <cstdint>
#include <vector>

#include "ulelab/hull.hpp"
#include "ulelab/sampling.hpp"

// Finite windows of the Schroedinger operator, their eigendecomposition,
// eigenvalue-to-site matching, and the numerical construction of the dressed
// potential whose operator has the prescribed eigenvalues.
namespace ulelab::specops {

// Poeschel form: H = eps * (off-diagonal ones) + diag(d); Standard form:
// hopping 1 with diagonal d / eps. Zero Dirichlet truncation outside.
enum class WindowForm { Poeschel, Standard };

struct OperatorWindow {
  std::int64_t offset = 0;
  int size = 0;
  std::vector<double> diagonal;
  double hopping = 0;  // eps (Poeschel) or 1 (Standard)
  WindowForm form = WindowForm::Poeschel;

  double scale() const;  // ||diag||_inf + 2 * hopping
};

OperatorWindow build_window(const sampling::LimitPeriodicSeries& series,
                            const hull::GroupElement& g, std::int64_t offset, int size,
                            double eps, WindowForm form, int k_layers);

// Window straight from a diagonal already in the target form's units.
OperatorWindow window_from_diagonal(std::vector<double> diagonal, double eps, WindowForm form,
                                    std::int64_t offset = 0);

struct EigenSystem {
  std::vector<double> eigenvalues;           // ascending
  std::vector<std::vector<double>> vectors;  // vectors[k][n], orthonormal
  std::vector<int> centers;                  // argmax |u_k|, leftmost on tie
  double residual_bound = 0;                 // max ||Hv - lambda v||_inf observed
  double hopping = 0;
  std::int64_t offset = 0;

  int size() const { return static_cast<int>(eigenvalues.size()); }
};

// Full orthonormal decomposition with deterministic ordering (ascending
// eigenvalues, largest-magnitude entry of each vector positive, leftmost on
// tie). Throws if the solver fails or the orthonormality/residual checks
// exceed 1e-10 of the window scale.
EigenSystem eigensystem(const OperatorWindow& w);

struct MatchReport {
  struct Entry {
    int vector_index = 0;
    int center = 0;
    double eigenvalue = 0;
    double target = 0;
    double mismatch = 0;
  };
  std::vector<Entry> entries;               // one per eigenvector
  double max_interior_mismatch = 0;         // over centers >= margin from both edges
  int interior_sites = 0;
  int unmatched_interior = 0;               // interior sites no vector is centered on
  std::vector<int> collision_sites;         // sites claimed by more than one vector
};

// Pairs each eigenvector with the target at its localization center; center
// collisions are diagnostics, not errors.
MatchReport match_eigenvalues(const EigenSystem& e, const std::vector<double>& targets,
                              int interior_margin);

struct DressedResult {
  std::vector<double> p;  // Standard-form diagonal; equals the targets at eps = 0
  double epsilon = 0;
  bool converged = false;
  int iterations = 0;  // corrective steps actually applied
  double final_mismatch = 0;
  struct TraceRow {
    int iter;
    double interior_mismatch;
    double damping;
    int collisions;
  };
  std::vector<TraceRow> trace;

  // The dressed diagonal in Poeschel normalization (eps * p, or p at eps = 0).
  std::vector<double> dressed_diagonal() const;
};

// Fixed-point inverse-spectral iteration: p0 = d/eps; at each step
// diagonalize, match eigenvalues to centers and move each matched site's
// diagonal by the remaining eigenvalue error. Damping starts at 1 and is
// halved when the interior mismatch starts oscillating.
DressedResult construct_dressed_potential(const std::vector<double>& d_targets, double eps,
                                          double tol, int max_iter, int interior_margin = -1,
                                          const std::vector<double>* initial = nullptr);

// ||eps * p - d||_inf over the interior (Poeschel normalization); at eps = 0
// the dressed diagonal is p itself.
double dressed_deviation(const std::vector<double>& p, const std::vector<double>& d_targets,
                         double eps, int interior_margin = -1);

}  // namespace ulelab::specops
