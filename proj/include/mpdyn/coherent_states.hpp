// coherent_states.hpp — closed-form geometry of the instruction-state manifold:
// Weyl phases, overlaps, the vacuum-orthogonal interpolation, beam intensities,
// and number-operator statistics.

#pragma once

#include "mpdyn/phase_space.hpp"

#include <vector>

namespace mpdyn {

// Phase/magnitude split of the overlap <a|b> of two instruction states:
//   <a|b> = e^{i theta} e^{-|a-b|^2/2},  theta = Im(a* . b).
struct OverlapValue {
  double phase;       // radians, theta as defined above
  double magnitude;   // e^{-|a-b|^2/2}, in [0, 1]
  Complex value;      // e^{i phase} * magnitude
};

// theta = Im(a* . b); antisymmetric under swapping the arguments
double weyl_phase(const PhaseVector& a, const PhaseVector& b);

OverlapValue overlap(const PhaseVector& a, const PhaseVector& b);

// beam intensity I = |psi|^2; additive over disjoint-support decompositions
double intensity(const PhaseVector& v);

// Overlap of the normalized vacuum-orthogonal projections:
//   <a_perp|b_perp> = (<a|b> - e^{-(|a|^2+|b|^2)/2})
//                     / sqrt((1 - e^{-|a|^2})(1 - e^{-|b|^2})).
// Undefined at the vacuum; zero-norm inputs are rejected.
Complex perp_overlap(const PhaseVector& a, const PhaseVector& b);

// Number-operator statistics in the vacuum-orthogonal state. With
// E = 1 - e^{-|psi|^2}:
//   <N_k>   = |psi_k|^2 / E            <N>   = |psi|^2 / E
//   <N_k^2> = (|psi_k|^4 + |psi_k|^2)/E, <N^2> = (|psi|^4 + |psi|^2)/E
// and marker = sqrt(<N^2> - <N>^2) / <N>.
struct BeamStats {
  RealVector nbar_k;
  RealVector var_k;
  double nbar_total;
  double n2bar_total;
  double marker;
};

BeamStats beam_stats(const PhaseVector& v);

// The total-number dispersion marker Delta N / Nbar on a single-mode state,
// swept over |psi| in [norm_min, norm_max] with the given step. The marker
// vanishes in both the small- and large-norm limits and peaks in between;
// argmax is reported at grid resolution, without interpolation.
struct MarkerPoint {
  double norm;
  double marker;
};

struct MarkerScan {
  std::vector<MarkerPoint> curve;
  double argmax_norm;
  double max_marker;
};

MarkerScan marker_scan(double norm_min = 0.05, double norm_max = 20.0, double step = 0.001);

}  // namespace mpdyn
