#include "mpdyn/measurement.hpp"

#include "mpdyn/coherent_states.hpp"

#include <sstream>

namespace mpdyn::measurement {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// cosh/sinh orbit of one pair
void pair_orbit(Complex lambda, Complex mu, Complex eta, double t, Complex& lambda_t,
                Complex& mu_t) {
  double mag = std::abs(eta);
  if (mag == 0.0) {
    lambda_t = lambda;
    mu_t = mu;
    return;
  }
  Complex phase = eta / mag;
  double c = std::cosh(mag * t);
  double s = std::sinh(mag * t);
  lambda_t = lambda * c + std::conj(mu) * phase * s;
  mu_t = mu * c + std::conj(lambda) * phase * s;
}

}  // namespace

MeasurementScenario::MeasurementScenario(Vector lambda, Vector mu, Vector eta_, double time_)
    : lambda0(std::move(lambda)), mu0(std::move(mu)), eta(std::move(eta_)), time(time_) {
  require(lambda0.size() >= 1, "MeasurementScenario: need at least one pair");
  require(lambda0.size() == mu0.size() && lambda0.size() == eta.size(),
          "MeasurementScenario: lambda, mu, eta must have equal length");
  require(all_finite(lambda0) && all_finite(mu0) && all_finite(eta),
          "MeasurementScenario: amplitudes and couplings must be finite");
  require(std::isfinite(time), "MeasurementScenario: time must be finite");
}

MeasurementScenario MeasurementScenario::ready(Vector lambda, Vector eta, double time) {
  Index n = lambda.size();
  return MeasurementScenario(std::move(lambda), Vector::Zero(n), std::move(eta), time);
}

QuadraticGenerator MeasurementScenario::coupling_generator() const {
  return QuadraticGenerator::pair_coupling(eta);
}

PhaseVector MeasurementScenario::initial_state() const {
  Vector joint(2 * pairs());
  joint.head(pairs()) = lambda0;
  joint.tail(pairs()) = mu0;
  return PhaseVector(joint);
}

PhaseVector MeasurementRecord::phase_point() const {
  Vector joint(lambda_t.size() + mu_t.size());
  joint.head(lambda_t.size()) = lambda_t;
  joint.tail(mu_t.size()) = mu_t;
  return PhaseVector(joint);
}

MeasurementRecord run(const MeasurementScenario& s) {
  Index n = s.pairs();
  MeasurementRecord rec;
  rec.lambda_t.resize(n);
  rec.mu_t.resize(n);
  for (Index j = 0; j < n; ++j) {
    pair_orbit(s.lambda0(j), s.mu0(j), s.eta(j), s.time, rec.lambda_t(j), rec.mu_t(j));
  }
  rec.norm_sq = rec.lambda_t.squaredNorm() + rec.mu_t.squaredNorm();
  return rec;
}

Vector recover_lambda(const Vector& mu_t, const Vector& eta, double t) {
  require(mu_t.size() == eta.size(), "recover_lambda: mu and eta must have equal length");
  require(t > 0.0, "recover_lambda: zero time cannot be inverted");
  Vector lambda(mu_t.size());
  for (Index j = 0; j < mu_t.size(); ++j) {
    double mag = std::abs(eta(j));
    if (mag == 0.0)
      throw std::invalid_argument("recover_lambda: zero coupling cannot be inverted");
    Complex phase = eta(j) / mag;
    lambda(j) = std::conj(mu_t(j) / (phase * std::sinh(mag * t)));
  }
  return lambda;
}

RealVector amplitude_ratios(const Vector& mu_t, Index reference) {
  require(reference >= 0 && reference < mu_t.size(), "amplitude_ratios: reference out of range");
  double ref = std::norm(mu_t(reference));
  if (ref == 0.0)
    throw std::invalid_argument("amplitude_ratios: zero reference component");
  RealVector ratios(mu_t.size());
  for (Index j = 0; j < mu_t.size(); ++j) ratios(j) = std::norm(mu_t(j)) / ref;
  return ratios;
}

double resolvability(const Vector& lambda1, const Vector& lambda2, double eta_mag, double t) {
  require(lambda1.size() == lambda2.size(), "resolvability: amplitude lists differ in length");
  require(eta_mag >= 0.0 && std::isfinite(eta_mag) && std::isfinite(t),
          "resolvability: coupling and time must be finite");
  double closed = std::exp(-(lambda1 - lambda2).squaredNorm() * std::cosh(2.0 * eta_mag * t));

  // consistency route: overlap of the two amplified orbits
  Index n = lambda1.size();
  Vector eta = Vector::Constant(n, Complex(eta_mag, 0.0));
  MeasurementRecord r1 = run(MeasurementScenario::ready(lambda1, eta, t));
  MeasurementRecord r2 = run(MeasurementScenario::ready(lambda2, eta, t));
  double squared = std::norm(overlap(r1.phase_point(), r2.phase_point()).value);
  if (std::abs(squared - closed) > 1e-12) {
    std::ostringstream os;
    os << "resolvability: closed form and orbit overlap disagree by "
       << std::abs(squared - closed);
    throw NumericalGuardError(os.str());
  }
  return closed;
}

double choose_eta(double lattice_spacing, double eps, double t) {
  require(lattice_spacing > 0.0, "choose_eta: lattice spacing must be positive");
  require(eps > 0.0 && eps < 1.0, "choose_eta: need 0 < eps < 1");
  require(t > 0.0, "choose_eta: time must be positive");
  double needed = std::log(1.0 / eps) / (lattice_spacing * lattice_spacing);
  if (needed <= 1.0) return 0.0;  // already resolved with no coupling
  return std::acosh(needed) / (2.0 * t);
}

double reverse_check(const MeasurementScenario& s) {
  QuadraticGenerator g = s.coupling_generator();
  PhaseVector start = s.initial_state();
  PhaseVector there = apply(flow(g, s.time), start);
  PhaseVector back = apply(flow(g, -s.time), there);
  return (back.components() - start.components()).cwiseAbs().maxCoeff();
}

}  // namespace mpdyn::measurement
