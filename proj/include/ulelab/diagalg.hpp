#pragma once

#include <map>
#include <vector>

// Matrices stored as indexed families of diagonals, the weighted norms of the
// spaces M^s at finite volume, the diagonal product identity and conjugation
// residuals. Translation-dependent identities are asserted on interior index
// sets only.
namespace ulelab::diagalg {

// Window-sized matrix keyed by diagonal offset k; diagonal k holds the
// entries A_k(i) = a(i, i+k) for i in [max(0,-k), n - max(0,k)), stored
// densely in that order. Absent offsets are zero diagonals.
class DiagMatrix {
 public:
  explicit DiagMatrix(int n);
  static DiagMatrix identity(int n);
  static DiagMatrix from_dense(const std::vector<std::vector<double>>& a);
  static DiagMatrix from_diagonal(const std::vector<double>& d0);
  static DiagMatrix from_tridiagonal(const std::vector<double>& diag, double hopping);
  // Columns as a list of vectors: cols[j][i] is the (i, j) entry.
  static DiagMatrix from_columns(const std::vector<std::vector<double>>& cols);

  int size() const { return n_; }
  void set_diagonal(int k, std::vector<double> values);
  bool has_diagonal(int k) const { return diagonals_.count(k) > 0; }
  const std::vector<double>& diagonal(int k) const;
  std::vector<int> stored_offsets() const;

  // A_k(i); zero when the offset is absent or i leaves the valid range.
  double at(int k, int i) const;
  double entry(int i, int j) const { return at(j - i, i); }

  std::vector<std::vector<double>> to_dense() const;

  // First valid sequence index of diagonal k.
  static int lo_index(int k) { return k < 0 ? -k : 0; }
  int diag_length(int k) const { return n_ - (k < 0 ? -k : k); }

 private:
  int n_;
  std::map<int, std::vector<double>> diagonals_;
};

// sup over stored k of ||A_k||_inf e^{|k| s}.
double norm_s(const DiagMatrix& a, double s);

// Z_k = sum_l A_l . T^l(B_{k-l}) with pointwise products of shifted
// diagonals; agrees exactly with dense multiplication.
DiagMatrix diag_product(const DiagMatrix& a, const DiagMatrix& b);

// Max-entry of HV - VD, both sides assembled diagonal-by-diagonal.
double conjugation_residual(const DiagMatrix& h, const DiagMatrix& v, const DiagMatrix& d);

struct DecayProfile {
  std::vector<std::pair<int, double>> points;  // (k, sup-norm of V_k)
  bool fit_ok = false;  // refused with fewer than 3 points above the floor
  double c_fit = 0;
  double r_fit = 0;
};

// Per-diagonal sup-norms with a least-squares line through
// (|k|, log sup-norm) over points above the floor.
DecayProfile diagonal_decay_profile(const DiagMatrix& v, double fit_floor = 1e-14);

// Residual of the translated conjugation identity
//   T^{-1} V~_{k+1} + H~_0 . V~_k + T V~_{k-1} = V~_k . T^k(D~_0)
// with V~_k(i) = V_k(i+t) and D~_0(i) = D_0(i+t), evaluated only where every
// referenced entry lies inside the original window and i keeps the given
// interior margin. h_shifted is the window operator at the shifted phase.
double shift_covariance_residual(const DiagMatrix& h_shifted, const DiagMatrix& v,
                                 const DiagMatrix& d, int t, int margin);

}  // namespace ulelab::diagalg
