#pragma once

#include <cstdint>
#include <vector>

// Approximation functions Q, the derived q(t) = t^{-4} sup_x Q(x) e^{-tx},
// and certified upper bounds on the schedule product h(t).
namespace ulelab::approx {

enum class QKind { Constant, PowerLaw, Tabulated };

// Q : [0, inf) -> [1, inf), nondecreasing for the closed-form kinds.
// PowerLaw is beta * x^r for x >= x0 and the constant beta * x0^r below; with
// x0 = 0 it degenerates to the bare power law used in scaling studies.
class ApproximationFunction {
 public:
  static ApproximationFunction constant(double c);
  static ApproximationFunction power_law(double beta, double r, double x0);
  static ApproximationFunction tabulated(std::vector<double> x, std::vector<double> q);
  // The distal-sequence Q: floor 3/2 * n1^{3m+1} below n1, then 3/2 * x^{3m+1}.
  static ApproximationFunction lemma_distal(std::int64_t n1, int m);

  QKind kind() const { return kind_; }
  double value(double x) const;

  double beta() const { return beta_; }
  double exponent() const { return r_; }
  double x0() const { return x0_; }
  const std::vector<double>& grid_x() const { return grid_x_; }
  const std::vector<double>& grid_q() const { return grid_q_; }

 private:
  ApproximationFunction() = default;
  QKind kind_ = QKind::Constant;
  double beta_ = 1, r_ = 0, x0_ = 0;
  std::vector<double> grid_x_, grid_q_;
};

// q(t) = t^{-4} sup_{x>=0} Q(x) e^{-tx}. Closed form for the analytic kinds;
// for tabulated Q the grid maximum, reported as +inf when it sits on the last
// grid point (the supremum is then not bracketed by the table).
double q_of(const ApproximationFunction& Q, double t);

// Nonincreasing admissible schedule t_i = t (1-ratio) ratio^i; partial sums
// stay <= t for any ratio in (0,1), and ratio = 1/2 gives t_i = t 2^{-i-1}.
struct KappaSchedule {
  double ratio = 0.5;
  static KappaSchedule geometric(double ratio);
  double t_i(double t, int i) const;
};

// Upper bound on h(t) = inf over schedules of prod_i q(t_i)^{2^{-i-1}}:
// the product along the given schedule, truncated once the remaining
// exponent mass drops below weight_cut, plus an analytic bound on the
// truncated log-tail (exact for the constant and bare power-law kinds).
double h_upper(const ApproximationFunction& Q, double t,
               const KappaSchedule& schedule = KappaSchedule{}, double weight_cut = 1e-12);

// Min of h_upper over a small grid of geometric ratios around 1/2; any
// admissible schedule's product bounds the infimum from above, so the min
// over evaluated schedules is still a certified upper bound.
double h_upper_refined(const ApproximationFunction& Q, double t, double weight_cut = 1e-12);

// True iff q_of and h_upper are finite at every grid point.
bool is_approximation_function(const ApproximationFunction& Q,
                               const std::vector<double>& t_grid);

}  // namespace ulelab::approx
