// measurement.hpp — the amplification workflow: run an object-device coupling,
// read the pointer, recover object amplitudes, size couplings for a target
// resolvability, and verify reversibility.
//
// A scenario couples object amplitudes lambda_j to device amplitudes mu_j
// pairwise (no cross-pair couplings); the orbit of pair j is
//   lambda_jt = lambda_j cosh(|eta_j| t) + conj(mu_j) e^{i arg eta_j} sinh(|eta_j| t)
//   mu_jt     = mu_j     cosh(|eta_j| t) + conj(lambda_j) e^{i arg eta_j} sinh(|eta_j| t)
// which is exactly the flow of QuadraticGenerator::pair_coupling(eta) on the
// concatenated vector (lambda, mu).

#pragma once

#include "mpdyn/phase_space.hpp"

namespace mpdyn::measurement {

struct MeasurementScenario {
  Vector lambda0;  // object amplitudes
  Vector mu0;      // device amplitudes; all-zero is the "ready" state
  Vector eta;      // complex coupling per pair
  double time;

  MeasurementScenario(Vector lambda, Vector mu, Vector eta, double time);
  // ready-state scenario: mu = 0
  static MeasurementScenario ready(Vector lambda, Vector eta, double time);

  Index pairs() const { return lambda0.size(); }
  // the coupling generator on 2n modes (object modes first, then device)
  QuadraticGenerator coupling_generator() const;
  // concatenated (lambda, mu) phase-space point
  PhaseVector initial_state() const;
};

struct MeasurementRecord {
  Vector lambda_t;
  Vector mu_t;
  double norm_sq;  // |psi_t|^2 of the concatenated point

  PhaseVector phase_point() const;
};

// Closed-form orbit at the scenario time. Agrees with
// apply(flow(coupling_generator(), t), initial_state()).
MeasurementRecord run(const MeasurementScenario& s);

// Invert the pointer reading: lambda_j = conj(mu_jt e^{-i arg eta_j} / sinh(|eta_j| t)).
// Requires t > 0 and every eta_j != 0 (zero pointer gain cannot be inverted).
Vector recover_lambda(const Vector& mu_t, const Vector& eta, double t);

// |mu_j / mu_ref|^2, which equals |lambda_j / lambda_ref|^2 when all |eta_j|
// are equal — the sinh gains cancel. The caller asserts uniform |eta|; with
// non-uniform couplings the ratios mean nothing and are not claimed.
RealVector amplitude_ratios(const Vector& mu_t, Index reference = 0);

// Squared overlap of the two amplified states for ready devices and uniform
// coupling magnitude: exp(-|l1 - l2|^2 cosh(2 eta_mag t)). Internally verified
// against the overlap of the two closed-form orbits to 1e-12.
double resolvability(const Vector& lambda1, const Vector& lambda2, double eta_mag, double t);

// Smallest coupling magnitude with exp(-delta^2 cosh(2 eta t)) <= eps at time
// t: arccosh(ln(1/eps)/delta^2)/(2t) when the argument is >= 1, else 0.
double choose_eta(double lattice_spacing, double eps, double t);

// Forward t then backward t through the same generator; returns the max
// amplitude deviation from the initial state.
double reverse_check(const MeasurementScenario& s);

}  // namespace mpdyn::measurement
