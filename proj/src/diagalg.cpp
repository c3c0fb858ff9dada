#include "ulelab/diagalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ulelab::diagalg {

DiagMatrix::DiagMatrix(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("matrix size must be positive");
}

DiagMatrix DiagMatrix::identity(int n) {
  DiagMatrix m(n);
  m.set_diagonal(0, std::vector<double>(n, 1.0));
  return m;
}

DiagMatrix DiagMatrix::from_dense(const std::vector<std::vector<double>>& a) {
  int n = static_cast<int>(a.size());
  DiagMatrix m(n);
  for (const auto& row : a)
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("dense matrix not square");
  for (int k = -(n - 1); k <= n - 1; ++k) {
    std::vector<double> diag(m.diag_length(k));
    bool nonzero = false;
    for (int i = lo_index(k), idx = 0; idx < static_cast<int>(diag.size()); ++i, ++idx) {
      diag[idx] = a[i][i + k];
      nonzero = nonzero || diag[idx] != 0.0;
    }
    if (nonzero) m.set_diagonal(k, std::move(diag));
  }
  return m;
}

DiagMatrix DiagMatrix::from_diagonal(const std::vector<double>& d0) {
  DiagMatrix m(static_cast<int>(d0.size()));
  m.set_diagonal(0, d0);
  return m;
}

DiagMatrix DiagMatrix::from_tridiagonal(const std::vector<double>& diag, double hopping) {
  DiagMatrix m(static_cast<int>(diag.size()));
  m.set_diagonal(0, diag);
  if (hopping != 0.0 && diag.size() > 1) {
    std::vector<double> off(diag.size() - 1, hopping);
    m.set_diagonal(+1, off);
    m.set_diagonal(-1, off);
  }
  return m;
}

DiagMatrix DiagMatrix::from_columns(const std::vector<std::vector<double>>& cols) {
  int n = static_cast<int>(cols.size());
  std::vector<std::vector<double>> dense(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    if (static_cast<int>(cols[j].size()) != n)
      throw std::invalid_argument("column length mismatch");
    for (int i = 0; i < n; ++i) dense[i][j] = cols[j][i];
  }
  return from_dense(dense);
}

void DiagMatrix::set_diagonal(int k, std::vector<double> values) {
  if (k <= -n_ || k >= n_) throw std::invalid_argument("diagonal offset out of range");
  if (static_cast<int>(values.size()) != diag_length(k))
    throw std::invalid_argument("stored diagonal length must be n - |k|");
  diagonals_[k] = std::move(values);
}

const std::vector<double>& DiagMatrix::diagonal(int k) const {
  auto it = diagonals_.find(k);
  if (it == diagonals_.end()) throw std::invalid_argument("diagonal not stored");
  return it->second;
}

std::vector<int> DiagMatrix::stored_offsets() const {
  std::vector<int> out;
  out.reserve(diagonals_.size());
  for (const auto& [k, v] : diagonals_) out.push_back(k);
  return out;
}

double DiagMatrix::at(int k, int i) const {
  auto it = diagonals_.find(k);
  if (it == diagonals_.end()) return 0.0;
  int idx = i - lo_index(k);
  if (idx < 0 || idx >= static_cast<int>(it->second.size())) return 0.0;
  return it->second[idx];
}

std::vector<std::vector<double>> DiagMatrix::to_dense() const {
  std::vector<std::vector<double>> a(n_, std::vector<double>(n_, 0.0));
  for (const auto& [k, diag] : diagonals_)
    for (int idx = 0, i = lo_index(k); idx < static_cast<int>(diag.size()); ++idx, ++i)
      a[i][i + k] = diag[idx];
  return a;
}

double norm_s(const DiagMatrix& a, double s) {
  if (s < 0) throw std::invalid_argument("norm index s must be >= 0");
  double best = 0;
  for (int k : a.stored_offsets()) {
    double sup = 0;
    for (double v : a.diagonal(k)) sup = std::max(sup, std::abs(v));
    best = std::max(best, sup * std::exp(std::abs(static_cast<double>(k)) * s));
  }
  return best;
}

DiagMatrix diag_product(const DiagMatrix& a, const DiagMatrix& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dimension mismatch");
  int n = a.size();
  std::map<int, std::vector<double>> acc;
  for (int l : a.stored_offsets()) {
    const auto& al = a.diagonal(l);
    for (int kb : b.stored_offsets()) {
      int k = l + kb;
      if (k <= -n || k >= n) continue;
      auto [it, inserted] = acc.try_emplace(k, std::vector<double>());
      if (inserted) it->second.assign(n - std::abs(k), 0.0);
      std::vector<double>& zk = it->second;
      int lo = DiagMatrix::lo_index(k);
      for (int idx = 0; idx < static_cast<int>(zk.size()); ++idx) {
        int i = lo + idx;
        // Z_k(i) += A_l(i) * B_{k-l}(i+l); out-of-range factors are zero.
        int ai = i - DiagMatrix::lo_index(l);
        if (ai < 0 || ai >= static_cast<int>(al.size())) continue;
        zk[idx] += al[ai] * b.at(kb, i + l);
      }
    }
  }
  DiagMatrix z(n);
  for (auto& [k, diag] : acc) z.set_diagonal(k, std::move(diag));
  return z;
}

double conjugation_residual(const DiagMatrix& h, const DiagMatrix& v, const DiagMatrix& d) {
  if (h.size() != v.size() || v.size() != d.size())
    throw std::invalid_argument("dimension mismatch");
  DiagMatrix hv = diag_product(h, v);
  DiagMatrix vd = diag_product(v, d);
  double worst = 0;
  int n = h.size();
  for (int k = -(n - 1); k <= n - 1; ++k) {
    if (!hv.has_diagonal(k) && !vd.has_diagonal(k)) continue;
    for (int i = DiagMatrix::lo_index(k); i < DiagMatrix::lo_index(k) + hv.diag_length(k); ++i)
      worst = std::max(worst, std::abs(hv.at(k, i) - vd.at(k, i)));
  }
  return worst;
}

DecayProfile diagonal_decay_profile(const DiagMatrix& v, double fit_floor) {
  DecayProfile profile;
  for (int k : v.stored_offsets()) {
    double sup = 0;
    for (double x : v.diagonal(k)) sup = std::max(sup, std::abs(x));
    profile.points.emplace_back(k, sup);
  }
  // Least squares of log sup-norm against |k|.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int npts = 0;
  for (const auto& [k, sup] : profile.points) {
    if (sup <= fit_floor) continue;
    double x = std::abs(static_cast<double>(k));
    double y = std::log(sup);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++npts;
  }
  if (npts < 3) return profile;  // fit refused
  double det = npts * sxx - sx * sx;
  if (det == 0) return profile;
  double slope = (npts * sxy - sx * sy) / det;
  double intercept = (sy - slope * sx) / npts;
  profile.fit_ok = true;
  profile.r_fit = -slope;
  profile.c_fit = std::exp(intercept);
  return profile;
}

double shift_covariance_residual(const DiagMatrix& h_shifted, const DiagMatrix& v,
                                 const DiagMatrix& d, int t, int margin) {
  int n = v.size();
  if (h_shifted.size() != n || d.size() != n) throw std::invalid_argument("dimension mismatch");
  if (margin < 0 || 2 * margin >= n) throw std::invalid_argument("margin out of range");
  if (std::abs(t) > margin)
    throw std::invalid_argument("translation exceeds the interior margin");

  auto v_in_range = [&](int k, int i) {
    return i >= DiagMatrix::lo_index(k) && i < DiagMatrix::lo_index(k) + v.diag_length(k);
  };

  std::vector<int> h_offsets = h_shifted.stored_offsets();
  double worst = 0;
  for (int k = -(n - 1); k <= n - 1; ++k) {
    for (int i = margin; i < n - margin; ++i) {
      bool inside = v_in_range(k, i + t) && (i + k + t >= 0) && (i + k + t < n);
      for (int l : h_offsets) {
        if (i + l < 0 || i + l >= n) inside = false;
        if (inside && !v_in_range(k - l, i + l + t)) inside = false;
      }
      if (!inside) continue;
      double lhs = 0;
      for (int l : h_offsets) lhs += h_shifted.at(l, i) * v.at(k - l, i + l + t);
      double rhs = v.at(k, i + t) * d.at(0, i + k + t);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace ulelab::diagalg
