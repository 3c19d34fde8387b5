#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace thinfilm {

class SingularSystemError : public std::runtime_error {
public:
  SingularSystemError(const std::string &what, double condition_estimate)
      : std::runtime_error(what), condition_estimate_(condition_estimate) {}
  [[nodiscard]] double condition_estimate() const { return condition_estimate_; }

private:
  double condition_estimate_;
};

/// Square band matrix in LAPACK general-band layout, with room for the
/// fill-in produced by partial pivoting.
class BandedMatrix {
public:
  BandedMatrix(std::size_t n, int kl, int ku);

  [[nodiscard]] std::size_t size() const { return n_; }
  [[nodiscard]] int lower() const { return kl_; }
  [[nodiscard]] int upper() const { return ku_; }
  [[nodiscard]] bool in_band(std::size_t i, std::size_t j) const;

  double &operator()(std::size_t i, std::size_t j);
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const;

  void set_zero();
  /// y = A x
  [[nodiscard]] std::vector<double> multiply(std::span<const double> x) const;

private:
  friend class BandedLU;
  std::size_t n_;
  int kl_;
  int ku_;
  int ld_;
  std::vector<double> ab_;
};

/// LU factorization with partial pivoting of a BandedMatrix.
class BandedLU {
public:
  explicit BandedLU(BandedMatrix a);

  void solve_in_place(std::span<double> b) const;
  [[nodiscard]] std::vector<double> solve(std::span<const double> b) const;
  /// max|u_ii| / min|u_ii|, a cheap conditioning indicator.
  [[nodiscard]] double pivot_ratio() const;

private:
  BandedMatrix lu_;
  std::vector<std::size_t> piv_;
};

std::vector<double> solve_banded(BandedMatrix a, std::span<const double> b);

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 30;
  double fd_rel_step = 1e-7;
};

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Nonlinear system whose Jacobian is banded in the first n_band unknowns,
/// bordered by n_border dense unknowns/rows at the end. Band rows may depend
/// on any border unknown; border row r depends on the band unknowns listed
/// in border_support[r] and on all border unknowns.
struct BorderedSystem {
  std::size_t n_band = 0;
  std::size_t n_border = 0;
  int kl = 0;
  int ku = 0;
  std::vector<std::vector<std::size_t>> border_support;
  std::function<void(std::span<const double>, std::span<double>)> residual;
};

/// Newton iteration with a finite-difference Jacobian (column colouring on the band).
/// Stops when the max-norm residual falls below options.tol.
NewtonReport newton_bordered(const BorderedSystem &sys, std::vector<double> &u, const NewtonOptions &options);

double max_abs(std::span<const double> v);

} // namespace thinfilm
