#include "thinfilm/banded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace thinfilm {

BandedMatrix::BandedMatrix(std::size_t n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ld_) * n, 0.0) {
  if (kl < 0 || ku < 0) throw std::invalid_argument("BandedMatrix: negative bandwidth");
}

bool BandedMatrix::in_band(std::size_t i, std::size_t j) const {
  const auto ii = static_cast<long>(i);
  const auto jj = static_cast<long>(j);
  return ii - jj <= kl_ && jj - ii <= ku_ && i < n_ && j < n_;
}

double &BandedMatrix::operator()(std::size_t i, std::size_t j) {
  if (!in_band(i, j)) {
    std::ostringstream os;
    os << "BandedMatrix: entry (" << i << "," << j << ") outside band kl=" << kl_ << " ku=" << ku_;
    throw std::out_of_range(os.str());
  }
  const std::size_t r = static_cast<std::size_t>(kl_ + ku_) + i - j;
  return ab_[j * static_cast<std::size_t>(ld_) + r];
}

double BandedMatrix::operator()(std::size_t i, std::size_t j) const {
  if (!in_band(i, j)) return 0.0;
  const std::size_t r = static_cast<std::size_t>(kl_ + ku_) + i - j;
  return ab_[j * static_cast<std::size_t>(ld_) + r];
}

void BandedMatrix::set_zero() { std::fill(ab_.begin(), ab_.end(), 0.0); }

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j0 = i > static_cast<std::size_t>(kl_) ? i - kl_ : 0;
    const std::size_t j1 = std::min(n_ - 1, i + static_cast<std::size_t>(ku_));
    double acc = 0.0;
    for (std::size_t j = j0; j <= j1; ++j) acc += (*this)(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

BandedLU::BandedLU(BandedMatrix a) : lu_(std::move(a)), piv_(lu_.n_) {
  const std::size_t n = lu_.n_;
  const std::size_t kl = static_cast<std::size_t>(lu_.kl_);
  const std::size_t kv = static_cast<std::size_t>(lu_.kl_ + lu_.ku_);
  const std::size_t ld = static_cast<std::size_t>(lu_.ld_);
  auto at = [&](std::size_t r, std::size_t c) -> double & { return lu_.ab_[c * ld + kv + r - c]; };

  double max_entry = 0.0;
  for (double v : lu_.ab_) max_entry = std::max(max_entry, std::abs(v));

  std::size_t ju = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t km = std::min(kl, n - 1 - j);
    std::size_t jp = 0;
    double best = std::abs(at(j, j));
    for (std::size_t p = 1; p <= km; ++p) {
      const double v = std::abs(at(j + p, j));
      if (v > best) {
        best = v;
        jp = p;
      }
    }
    piv_[j] = j + jp;
    if (!(best > 1e-300) || !std::isfinite(best)) {
      std::ostringstream os;
      os << "singular banded system: zero pivot in column " << j;
      throw SingularSystemError(os.str(), std::numeric_limits<double>::infinity());
    }
    ju = std::max(ju, std::min(j + static_cast<std::size_t>(lu_.ku_) + jp, n - 1));
    if (jp != 0) {
      for (std::size_t c = j; c <= ju; ++c) std::swap(at(j, c), at(j + jp, c));
    }
    const double inv = 1.0 / at(j, j);
    for (std::size_t r = 1; r <= km; ++r) at(j + r, j) *= inv;
    for (std::size_t c = j + 1; c <= ju; ++c) {
      const double u = at(j, c);
      if (u == 0.0) continue;
      for (std::size_t r = 1; r <= km; ++r) at(j + r, c) -= at(j + r, j) * u;
    }
  }
  (void)max_entry;
}

void BandedLU::solve_in_place(std::span<double> b) const {
  const std::size_t n = lu_.n_;
  if (b.size() != n) throw std::invalid_argument("BandedLU::solve: size mismatch");
  const std::size_t kl = static_cast<std::size_t>(lu_.kl_);
  const std::size_t kv = static_cast<std::size_t>(lu_.kl_ + lu_.ku_);
  const std::size_t ld = static_cast<std::size_t>(lu_.ld_);
  auto at = [&](std::size_t r, std::size_t c) { return lu_.ab_[c * ld + kv + r - c]; };
  for (std::size_t j = 0; j < n; ++j) {
    if (piv_[j] != j) std::swap(b[j], b[piv_[j]]);
    const std::size_t km = std::min(kl, n - 1 - j);
    for (std::size_t r = 1; r <= km; ++r) b[j + r] -= at(j + r, j) * b[j];
  }
  for (std::size_t jj = n; jj-- > 0;) {
    b[jj] /= at(jj, jj);
    const std::size_t i0 = jj > kv ? jj - kv : 0;
    for (std::size_t i = i0; i < jj; ++i) b[i] -= at(i, jj) * b[jj];
  }
}

std::vector<double> BandedLU::solve(std::span<const double> b) const {
  std::vector<double> x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

double BandedLU::pivot_ratio() const {
  const std::size_t kv = static_cast<std::size_t>(lu_.kl_ + lu_.ku_);
  const std::size_t ld = static_cast<std::size_t>(lu_.ld_);
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t j = 0; j < lu_.n_; ++j) {
    const double v = std::abs(lu_.ab_[j * ld + kv]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi / lo;
}

std::vector<double> solve_banded(BandedMatrix a, std::span<const double> b) {
  BandedLU lu(std::move(a));
  return lu.solve(b);
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(x));
  }
  return m;
}

namespace {

// Small dense solve with partial pivoting; a is row-major n x n.
std::vector<double> dense_solve(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    if (a[p * n + k] == 0.0) throw SingularSystemError("singular border block", std::numeric_limits<double>::infinity());
    if (p != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a[k * n + c], a[p * n + c]);
      std::swap(b[k], b[p]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a[i * n + k] / a[k * n + k];
      for (std::size_t c = k; c < n; ++c) a[i * n + c] -= f * a[k * n + c];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = k + 1; c < n; ++c) b[k] -= a[k * n + c] * b[c];
    b[k] /= a[k * n + k];
  }
  return b;
}

} // namespace

NewtonReport newton_bordered(const BorderedSystem &sys, std::vector<double> &u, const NewtonOptions &options) {
  const std::size_t nb = sys.n_band;
  const std::size_t nd = sys.n_border;
  const std::size_t n = nb + nd;
  if (u.size() != n) throw std::invalid_argument("newton_bordered: unknown vector has the wrong length");
  if (sys.border_support.size() != nd) throw std::invalid_argument("newton_bordered: border support size mismatch");

  NewtonReport report;
  std::vector<double> r(n), rp(n), up(n);
  sys.residual(u, r);
  double rnorm = max_abs(r);
  report.residual_history.push_back(rnorm);
  if (!std::isfinite(rnorm)) return report;
  if (rnorm <= options.tol) {
    report.converged = true;
    return report;
  }

  const std::size_t ncol = static_cast<std::size_t>(sys.kl + sys.ku + 1);
  auto step_of = [&](double v) { return options.fd_rel_step * std::max(1.0, std::abs(v)); };

  for (int it = 1; it <= options.max_iter; ++it) {
    BandedMatrix B(nb, sys.kl, sys.ku);
    std::vector<double> C(nb * nd, 0.0); // column-major: C[k*nb + i]
    std::vector<double> R(nd * nb, 0.0); // row-major
    std::vector<double> D(nd * nd, 0.0);

    for (std::size_t color = 0; color < ncol && color < nb; ++color) {
      up = u;
      for (std::size_t j = color; j < nb; j += ncol) up[j] += step_of(u[j]);
      sys.residual(up, rp);
      for (std::size_t i = 0; i < nb; ++i) {
        const std::size_t j0 = i > static_cast<std::size_t>(sys.kl) ? i - sys.kl : 0;
        const std::size_t j1 = std::min(nb - 1, i + static_cast<std::size_t>(sys.ku));
        for (std::size_t j = j0; j <= j1; ++j) {
          if (j % ncol != color) continue;
          B(i, j) = (rp[i] - r[i]) / (up[j] - u[j]);
        }
      }
    }
    for (std::size_t k = 0; k < nd; ++k) {
      up = u;
      const std::size_t col = nb + k;
      up[col] += step_of(u[col]);
      sys.residual(up, rp);
      const double h = up[col] - u[col];
      for (std::size_t i = 0; i < nb; ++i) C[k * nb + i] = (rp[i] - r[i]) / h;
      for (std::size_t i = 0; i < nd; ++i) D[i * nd + k] = (rp[nb + i] - r[nb + i]) / h;
    }
    for (std::size_t row = 0; row < nd; ++row) {
      for (std::size_t j : sys.border_support[row]) {
        up = u;
        up[j] += step_of(u[j]);
        sys.residual(up, rp);
        R[row * nb + j] = (rp[nb + row] - r[nb + row]) / (up[j] - u[j]);
      }
    }

    BandedLU lu(std::move(B));
    std::vector<double> y(r.begin(), r.begin() + static_cast<long>(nb));
    for (double &v : y) v = -v;
    lu.solve_in_place(y);
    std::vector<double> du(n, 0.0);
    if (nd == 0) {
      std::copy(y.begin(), y.end(), du.begin());
    } else {
      std::vector<double> X(nb * nd);
      for (std::size_t k = 0; k < nd; ++k) {
        std::span<double> col(X.data() + k * nb, nb);
        std::copy(C.begin() + static_cast<long>(k * nb), C.begin() + static_cast<long>((k + 1) * nb), col.begin());
        lu.solve_in_place(col);
      }
      std::vector<double> S(nd * nd), rhs(nd);
      for (std::size_t i = 0; i < nd; ++i) {
        double ry = 0.0;
        for (std::size_t j = 0; j < nb; ++j) ry += R[i * nb + j] * y[j];
        rhs[i] = -r[nb + i] - ry;
        for (std::size_t k = 0; k < nd; ++k) {
          double rx = 0.0;
          for (std::size_t j = 0; j < nb; ++j) rx += R[i * nb + j] * X[k * nb + j];
          S[i * nd + k] = D[i * nd + k] - rx;
        }
      }
      const std::vector<double> x2 = dense_solve(S, rhs);
      for (std::size_t j = 0; j < nb; ++j) {
        double acc = y[j];
        for (std::size_t k = 0; k < nd; ++k) acc -= X[k * nb + j] * x2[k];
        du[j] = acc;
      }
      for (std::size_t k = 0; k < nd; ++k) du[nb + k] = x2[k];
    }

    double alpha = 1.0;
    double new_norm = 0.0;
    for (int ls = 0; ls < 12; ++ls) {
      for (std::size_t i = 0; i < n; ++i) up[i] = u[i] + alpha * du[i];
      sys.residual(up, rp);
      new_norm = max_abs(rp);
      if (std::isfinite(new_norm) && new_norm < rnorm) break;
      alpha *= 0.5;
    }
    u = up;
    r = rp;
    rnorm = new_norm;
    report.iterations = it;
    report.residual_history.push_back(rnorm);
    if (!std::isfinite(rnorm)) return report;
    if (rnorm <= options.tol) {
      report.converged = true;
      return report;
    }
  }
  return report;
}

} // namespace thinfilm
