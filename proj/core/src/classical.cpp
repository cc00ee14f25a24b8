#include "trapnet/classical.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "trapnet/errors.hpp"

namespace trapnet {
namespace {

void require_dephasing(double dephasing) {
  if (!(dephasing > 0.0) || !std::isfinite(dephasing)) {
    throw InvalidSpec("the classical limit needs a positive dephasing rate");
  }
}

}  // namespace

double incoherent_rate(double coupling, double decoherence, double mismatch) {
  return 2.0 * coupling * coupling * decoherence /
         (decoherence * decoherence + mismatch * mismatch);
}

ClassicalRates classical_rates(double hopping, double dephasing, double defect,
                               double trap_rate) {
  require_dephasing(dephasing);
  return ClassicalRates{
      .defect_bond = incoherent_rate(hopping, dephasing, defect),
      .body_bond = 2.0 * hopping * hopping / dephasing,
      .trap_bond = 2.0 * hopping * hopping / (dephasing + 0.5 * trap_rate),
  };
}

RateModel::RateModel(std::vector<double> hop_away, std::vector<double> hop_toward,
                     double trap_rate, ChainOrigin origin)
    : hop_away_(std::move(hop_away)),
      hop_toward_(std::move(hop_toward)),
      trap_rate_(trap_rate),
      origin_(origin) {
  const int m = static_cast<int>(hop_away_.size());
  if (m < 2 || hop_toward_.size() != hop_away_.size()) {
    throw InvalidSpec("a directed chain needs >= 2 sites and matching rate arrays");
  }
  if (hop_away_[m - 1] != 0.0 || hop_toward_[0] != 0.0) {
    throw InvalidSpec("rates leaving the chain ends must be zero");
  }
  for (int i = 0; i < m; ++i) {
    if (hop_away_[i] < 0.0 || hop_toward_[i] < 0.0) throw InvalidSpec("rates must be >= 0");
  }
  if (trap_rate_ < 0.0) throw InvalidSpec("trap rate must be >= 0");

  matrix_ = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    matrix_(i, i) = -(hop_away_[i] + hop_toward_[i]);
    if (i + 1 < m) matrix_(i + 1, i) = hop_away_[i];
    if (i > 0) matrix_(i - 1, i) = hop_toward_[i];
  }
  matrix_(0, 0) -= trap_rate_;
}

Eigen::VectorXd RateModel::initial_population() const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(sites());
  p(sites() - 1) = 1.0;
  return p;
}

RateModel build_rate_model(const NetworkSpec& spec, double dephasing) {
  spec.validate();
  require_dephasing(dephasing);
  const int L = spec.length;
  const double N = spec.branches;
  const ClassicalRates rates =
      classical_rates(spec.hopping, dephasing, spec.defect, spec.trap_rate);

  std::vector<double> away(L + 1, 0.0);
  std::vector<double> toward(L + 1, 0.0);
  for (int i = 1; i + 1 < L; ++i) away[i] = toward[i + 1] = rates.body_bond;
  if (L >= 2) away[L - 1] = toward[L] = rates.defect_bond;

  const double trap_bond =
      L >= 2 ? rates.trap_bond
             : incoherent_rate(spec.hopping, dephasing + 0.5 * spec.trap_rate, spec.defect);
  if (spec.kind == Topology::ExtendedStar) {
    // N branch sites feed the core at kC each; the core feeds N branches.
    away[0] = N * trap_bond;
    toward[1] = trap_bond;
  } else {
    away[0] = toward[1] = N * trap_bond;
  }

  return RateModel(std::move(away), std::move(toward), spec.trap_rate,
                   ChainOrigin{spec.kind, spec.branches, spec.total_sites(), rates});
}

RatePropagator::RatePropagator(const RateModel& model) {
  const int m = model.sites();
  const auto& away = model.hop_away();
  const auto& toward = model.hop_toward();
  for (int i = 0; i + 1 < m; ++i) {
    if (!(away[i] > 0.0) || !(toward[i + 1] > 0.0)) {
      throw InvalidSpec("rate propagation needs strictly positive bond rates");
    }
  }
  // K = D T D^{-1} with T symmetric tridiagonal, d_{i+1} / d_i = sqrt(away_i / toward_{i+1}).
  scale_.resize(m);
  scale_(0) = 1.0;
  for (int i = 0; i + 1 < m; ++i) scale_(i + 1) = scale_(i) * std::sqrt(away[i] / toward[i + 1]);

  Eigen::MatrixXd sym = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    sym(i, i) = model.matrix()(i, i);
    if (i + 1 < m) sym(i, i + 1) = sym(i + 1, i) = std::sqrt(away[i] * toward[i + 1]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  eigenvalues_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
  initial_modes_ = vectors_.transpose() * model.initial_population().cwiseQuotient(scale_);
}

Eigen::VectorXd RatePropagator::populations(double t) const {
  const Eigen::VectorXd decayed = (eigenvalues_.array() * t).exp() * initial_modes_.array();
  return scale_.cwiseProduct(vectors_ * decayed);
}

double RatePropagator::surviving(double t) const { return populations(t).sum(); }

ObservableSeries evolve_rates(const RateModel& model, std::span<const double> times,
                              const NetworkSpec& spec, double dephasing) {
  const RatePropagator propagator(model);
  ObservableSeries series;
  series.times.assign(times.begin(), times.end());
  series.spec = spec;
  series.dephasing = dephasing;
  series.provenance = Engine::Classical;
  series.absorbed.reserve(times.size());
  for (const double t : times) series.absorbed.push_back(clamp_probability(1.0 - propagator.surviving(t)));
  return series;
}

MfptClosedForm mfpt_closed_form(const NetworkSpec& spec, double dephasing) {
  spec.validate();
  require_dephasing(dephasing);
  if (spec.length < 2) throw InvalidSpec("the closed-form absorption time needs L >= 2");
  if (!(spec.trap_rate > 0.0)) throw InvalidSpec("the closed-form absorption time needs Gamma > 0");

  const ClassicalRates k = classical_rates(spec.hopping, dephasing, spec.defect, spec.trap_rate);
  const double L = spec.length;
  const double N = spec.branches;
  const double delta_ch = spec.kind == Topology::AsymmetricChain ? 1.0 : 0.0;
  const double mean = spec.total_sites() / spec.trap_rate + 1.0 / k.defect_bond +
                      (L + 1.0) * (L - 2.0) / (2.0 * k.body_bond) +
                      (L / k.trap_bond) * (1.0 + delta_ch * (1.0 - N) / N);
  return {mean, std::numbers::ln2 * mean};
}

MfptInverse mfpt_via_inverse(const RateModel& model) {
  if (!(model.trap_rate() > 0.0)) {
    throw SingularRateMatrix("rate matrix is singular without trapping (Gamma = 0)");
  }
  const int m = model.sites();
  MfptInverse result;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(model.matrix());
  if (!lu.isInvertible()) throw SingularRateMatrix("rate matrix is not invertible");
  const Eigen::VectorXd residence = lu.solve(-model.initial_population());
  result.linear_solve = residence.sum();

  const auto& away = model.hop_away();
  const auto& toward = model.hop_toward();
  result.amplitudes.resize(m);
  result.amplitudes[0] = 1.0 / model.trap_rate();
  for (int i = 1; i < m; ++i) {
    result.amplitudes[i] = result.amplitudes[i - 1] * away[i - 1] / toward[i];
  }
  double tail = 0.0;  // sum_{n > i} r_n
  double total = 0.0;
  for (int i = m - 1; i >= 0; --i) {
    if (i + 1 < m) total += tail / (result.amplitudes[i] * away[i]);
    tail += result.amplitudes[i];
  }
  result.recurrence = total + tail;
  return result;
}

LaplaceWTD::LaplaceWTD(const RateModel& model) {
  const int m = model.sites();
  augmented_ = Eigen::MatrixXd::Zero(m + 1, m + 1);
  augmented_.bottomRightCorner(m, m) = model.matrix();
  augmented_(0, 1) = model.trap_rate();
  exit_rates_ = -augmented_.diagonal();
}

Eigen::MatrixXd LaplaceWTD::waiting_time_matrix(double z) const {
  const int n = size();
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      if (i != j) q(i, j) = augmented_(i, j) / (z + exit_rates_(j));
    }
  }
  return q;
}

Eigen::MatrixXd LaplaceWTD::waiting_time_derivative(double z) const {
  const int n = size();
  Eigen::MatrixXd dq = Eigen::MatrixXd::Zero(n, n);
  for (int j = 1; j < n; ++j) {
    const double denom = z + exit_rates_(j);
    for (int i = 0; i < n; ++i) {
      if (i != j) dq(i, j) = -augmented_(i, j) / (denom * denom);
    }
  }
  return dq;
}

namespace {

// phi_i = sum_{j != i} Q_ji phi_j on the transient sites, with phi_0 = 1:
// (I - A^T) phi = b, A = Q restricted to sites 1..M, b_i = Q_0i.
Eigen::FullPivLU<Eigen::MatrixXd> recursion_system(const Eigen::MatrixXd& q) {
  const int m = static_cast<int>(q.rows()) - 1;
  const Eigen::MatrixXd system =
      Eigen::MatrixXd::Identity(m, m) - q.bottomRightCorner(m, m).transpose();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  lu.setThreshold(1e-14);
  if (!lu.isInvertible()) {
    throw RecursionNonConvergent("first-passage recursion is singular (no absorbing exit?)");
  }
  return lu;
}

}  // namespace

Eigen::VectorXd LaplaceWTD::first_passage(double z) const {
  const Eigen::MatrixXd q = waiting_time_matrix(z);
  const int m = size() - 1;
  const Eigen::VectorXd rhs = q.row(0).tail(m).transpose();
  Eigen::VectorXd phi(size());
  phi(0) = 1.0;
  phi.tail(m) = recursion_system(q).solve(rhs);
  return phi;
}

Eigen::VectorXd LaplaceWTD::first_passage_derivative(double z) const {
  const Eigen::MatrixXd q = waiting_time_matrix(z);
  const Eigen::MatrixXd dq = waiting_time_derivative(z);
  const int m = size() - 1;
  const auto lu = recursion_system(q);
  const Eigen::VectorXd phi = lu.solve(Eigen::VectorXd(q.row(0).tail(m).transpose()));
  // Differentiating (I - A^T) phi = b gives (I - A^T) phi' = A'^T phi + b'.
  const Eigen::VectorXd rhs =
      dq.bottomRightCorner(m, m).transpose() * phi + dq.row(0).tail(m).transpose();
  Eigen::VectorXd dphi(size());
  dphi(0) = 0.0;
  dphi.tail(m) = lu.solve(rhs);
  return dphi;
}

MfptWtd mfpt_via_wtd(const RateModel& model) {
  const LaplaceWTD wtd(model);
  const int last = wtd.size() - 1;
  MfptWtd result;
  result.phi_at_zero = wtd.first_passage(0.0)(last);
  result.exact = -wtd.first_passage_derivative(0.0)(last);
  // Fourth-order central stencil; the step is scaled by the mean so that
  // h * tau_bar is the same small number for every chain.
  result.step = 1e-3 / result.exact;
  const double h = result.step;
  auto phi = [&](double z) { return wtd.first_passage(z)(last); };
  result.finite_difference =
      -(-phi(2.0 * h) + 8.0 * phi(h) - 8.0 * phi(-h) + phi(-2.0 * h)) / (12.0 * h);
  return result;
}

}  // namespace trapnet
