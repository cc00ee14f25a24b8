#include "trapnet/spectral.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "trapnet/errors.hpp"

namespace trapnet {

ModeExpansion::ModeExpansion(ComplexVector rates, ComplexVector amplitudes)
    : rates_(std::move(rates)), amplitudes_(std::move(amplitudes)) {}

Complex ModeExpansion::operator()(double t) const {
  Complex sum = 0.0;
  for (Eigen::Index k = 0; k < rates_.size(); ++k) sum += amplitudes_(k) * std::exp(rates_(k) * t);
  return sum;
}

Propagator::Propagator(ComplexVector eigenvalues, ComplexMatrix right, ComplexMatrix left)
    : eigenvalues_(std::move(eigenvalues)), right_(std::move(right)), left_(std::move(left)) {}

ComplexVector Propagator::apply(const ComplexVector& v0, double t) const {
  const ComplexVector coeffs = left_ * v0;
  const ComplexVector decayed = (eigenvalues_.array() * t).exp() * coeffs.array();
  return right_ * decayed;
}

ComplexMatrix Propagator::evolution_operator(double t) const {
  const ComplexVector phases = (eigenvalues_.array() * t).exp();
  return right_ * phases.asDiagonal() * left_;
}

ModeExpansion Propagator::expand(const ComplexVector& functional, const ComplexVector& v0) const {
  const ComplexVector projected = (functional.transpose() * right_).transpose();
  const ComplexVector coeffs = left_ * v0;
  return ModeExpansion(eigenvalues_, projected.cwiseProduct(coeffs));
}

double Propagator::max_condition() const {
  double worst = 0.0;
  for (int k = 0; k < dim(); ++k) {
    const double overlap = std::abs((left_.row(k) * right_.col(k)).value());
    const double cond = left_.row(k).norm() * right_.col(k).norm() / overlap;
    worst = std::max(worst, cond);
  }
  return worst;
}

Propagator diagonalize(const ComplexMatrix& generator) {
  const int n = static_cast<int>(generator.rows());
  if (n == 0 || generator.cols() != n) throw InvalidSpec("generator must be square and non-empty");
  if (!generator.allFinite()) throw InvalidSpec("generator has non-finite entries");

  ComplexMatrix work = generator;
  ComplexVector eigenvalues(n);
  ComplexMatrix right(n, n);
  const lapack_int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'V', n, reinterpret_cast<lapack_complex_double*>(work.data()), n,
      reinterpret_cast<lapack_complex_double*>(eigenvalues.data()), nullptr, n,
      reinterpret_cast<lapack_complex_double*>(right.data()), n);
  if (info != 0) {
    throw NearDefective("eigensolver failed to converge (zgeev info=" + std::to_string(info) + ")");
  }

  // Rows of R^{-1} are the left eigenvectors, biorthonormal to the columns
  // of R even inside degenerate eigenspaces.
  Eigen::PartialPivLU<ComplexMatrix> lu(right);
  ComplexMatrix left = lu.inverse();
  if (!left.allFinite()) throw NearDefective("right eigenvector matrix is singular");

  for (int k = 0; k < n; ++k) {
    const double overlap = std::abs((left.row(k) * right.col(k)).value());
    const double scale = left.row(k).norm() * right.col(k).norm();
    if (!(overlap >= kDefectiveOverlap * scale)) {
      throw NearDefective("mode " + std::to_string(k) + " is near-defective (|<L|R>| / ||L|| ||R|| = " +
                          std::to_string(overlap / scale) + ")");
    }
  }
  return Propagator(std::move(eigenvalues), std::move(right), std::move(left));
}

std::vector<ComplexVector> integrate_linear(const ComplexMatrix& generator, const ComplexVector& v0,
                                            std::span<const double> times, double rtol,
                                            double atol) {
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;

  const Eigen::Index n = v0.size();
  std::vector<ComplexVector> out;
  out.reserve(times.size());
  if (times.empty()) return out;
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw InvalidSpec("integration times must be ascending and non-negative");
  }

  // Complex state stored as interleaved (re, im) pairs.
  State x(2 * n);
  Eigen::Map<ComplexVector>(reinterpret_cast<Complex*>(x.data()), n) = v0;

  auto rhs = [&generator, n](const State& in, State& dxdt, double /*t*/) {
    Eigen::Map<const ComplexVector> v(reinterpret_cast<const Complex*>(in.data()), n);
    Eigen::Map<ComplexVector>(reinterpret_cast<Complex*>(dxdt.data()), n).noalias() = generator * v;
  };
  auto observer = [&out, n](const State& state, double /*t*/) {
    out.emplace_back(Eigen::Map<const ComplexVector>(reinterpret_cast<const Complex*>(state.data()), n));
  };

  std::vector<double> grid(times.begin(), times.end());
  const bool prepend_zero = grid.front() > 0.0;
  if (prepend_zero) grid.insert(grid.begin(), 0.0);

  const double norm = generator.cwiseAbs().rowwise().sum().maxCoeff();
  const double dt0 = norm > 0.0 ? 0.01 / norm : 0.01;
  auto stepper = odeint::make_dense_output(atol, rtol, odeint::runge_kutta_dopri5<State>());
  odeint::integrate_times(stepper, rhs, x, grid.begin(), grid.end(), dt0, observer);

  if (prepend_zero) out.erase(out.begin());
  return out;
}

}  // namespace trapnet
