// fock_oracle.hpp — brute-force truncated Fock-space realization of the
// operator formalism: ladder operators, displacement unitaries, normal-ordered
// quadratic generators and the unitaries they exponentiate to. Dense matrices
// only; this module is the independent oracle against which every closed-form
// identity in the library is checked.
//
// Basis ordering is occupation-number lexicographic with mode 0 slowest:
// index = n_0 (cutoff+1)^{m-1} + ... + n_{m-1}.

#pragma once

#include "mpdyn/phase_space.hpp"

#include <vector>

namespace mpdyn::fock {

// ----------------------------------------------------------------- FockSpaceSpec

// Truncated multi-mode Fock space: occupations 0..cutoff per mode, total
// dimension (cutoff+1)^n_modes, bounded by dim_limit to keep the dense
// matrix exponentials tractable.
struct FockSpaceSpec {
  int n_modes;
  int cutoff;
  Index dim_limit;

  explicit FockSpaceSpec(int n_modes, int cutoff, Index dim_limit = 4096);

  Index local_dim() const { return cutoff + 1; }
  Index dim() const;
  // occupation of `mode` in basis state `index`
  int occupation(Index index, int mode) const;

  bool operator==(const FockSpaceSpec& o) const {
    return n_modes == o.n_modes && cutoff == o.cutoff;
  }
};

// Probability threshold above which a state's truncation-edge content makes
// it unreliable for oracle comparisons.
inline constexpr double kTailGuard = 1e-8;

struct FockOperator {
  Matrix matrix;
  FockSpaceSpec space;
};

struct FockVector {
  Vector amplitudes;
  FockSpaceSpec space;
  double tail_mass;  // probability on states with any occupation == cutoff

  bool truncation_reliable() const { return tail_mass <= kTailGuard; }
};

// ------------------------------------------------------------------ construction

// Annihilation operators a_j, one per mode (ladder matrices tensored with
// identities). [a_i, a_j^dag] = delta_ij on every basis state below the
// truncation edge.
std::vector<FockOperator> mode_operators(const FockSpaceSpec& space);

FockOperator number_operator(const FockSpaceSpec& space, int mode);
FockOperator total_number_operator(const FockSpaceSpec& space);

FockVector vacuum(const FockSpaceSpec& space);

// recompute tail mass after acting with an operator
FockVector apply(const FockOperator& op, const FockVector& state);

// U(v) = exp(v . a^dag - v* . a). Guarded: throws NumericalGuardError when the
// displaced vacuum leaves more than kTailGuard probability on the edge.
FockOperator displacement(const FockSpaceSpec& space, const PhaseVector& v);

// |v> = U(v)|0>
FockVector state_from_instructions(const FockSpaceSpec& space, const PhaseVector& v);

// Numerically projected vacuum-orthogonal state: (|v> - <0|v>|0>)/norm.
// Independent of the closed-form expressions it is used to check.
FockVector perp_state(const FockSpaceSpec& space, const PhaseVector& v);

// :Gamma(a, a^dag): = sum_jk H_jk a_j^dag a_k + W_jk a_j^dag a_k^dag
//                     + conj(W_jk) a_j a_k
FockOperator normal_ordered_generator(const FockSpaceSpec& space, const QuadraticGenerator& g);

// V_t = exp(-i t :Gamma:)
FockOperator metaplectic_unitary(const FockSpaceSpec& space, const QuadraticGenerator& g,
                                 double t);

// ------------------------------------------------------------------ diagnostics

// Occupations <= cutoff/2 in every mode: the band on which truncated operator
// products still represent the untruncated ones to well below the guard, for
// the displacement sizes the oracle works at.
Matrix interior_band_projector(const FockSpaceSpec& space);

// Group-law check U(a+b) = e^{i theta} U(a) U(b) on the interior band, run
// for theta = +Im(a* . b) and the flipped sign; the smaller residual
// identifies the realized convention.
struct WeylCheck {
  double residual_plus;   // theta = +Im(a* . b)
  double residual_minus;  // theta = -Im(a* . b)
  int realized_sign;      // +1 or -1, whichever residual is smaller
  double best_residual;
};

WeylCheck weyl_relation_check(const FockSpaceSpec& space, const PhaseVector& a,
                              const PhaseVector& b);

// The sign realized by the exponentiated ladder algebra, asserted module-wide
// once weyl_relation_check has pinned it.
inline constexpr int kWeylPhaseSign = +1;

// || U(M_t v)|0> - V_t U(v) V_t^dag |0> || with M_t = flow(g, t). Also the
// same residual after removing a global phase, and that phase, so a central
// phase discrepancy would be visible separately.
struct ConjugationCheck {
  double residual;
  double residual_mod_phase;
  double phase;  // arg <rhs|lhs>
};

// enforce_guards=false computes the residual even when tail guards fail
// (used by the verification suite to report under-truncation as a failing
// number instead of an exception).
ConjugationCheck conjugation_check(const FockSpaceSpec& space, const QuadraticGenerator& g,
                                   double t, const PhaseVector& v, bool enforce_guards = true);

// max over modes and probe states of
//   || (V_t^dag a_j V_t - sum_k A_jk a_k - B_jk a_k^dag) |probe> ||
// with (A, B) = flow(g, t): the mode-operator transform matching the
// phase-space flow, checked on tail-guarded states near the vacuum.
double bogoliubov_residual(const FockSpaceSpec& space, const QuadraticGenerator& g, double t);

struct NumberStats {
  RealVector n_k;   // <N_j>
  RealVector n2_k;  // <N_j^2>
  double n_total;   // <N>
  double n2_total;  // <N^2>
};

NumberStats number_statistics(const FockVector& state);

// U(v) against the ordered product of per-block displacements for a
// partition of the modes into disjoint sets, plus the reversed product and
// the worst pairwise commutator action on the vacuum.
struct FactorizationCheck {
  double product_residual;
  double reversed_residual;
  double commutator_residual;
};

FactorizationCheck factorization_check(const FockSpaceSpec& space, const PhaseVector& v,
                                       const std::vector<std::vector<int>>& partition);

// || (|psi_{t+dt}> - |psi_{t-dt}>)/(2 dt) + i Hop |psi_t> || for a rotation
// generator (W = 0), with |psi_s> = U(flow(g,s) v)|0>. O(dt^2) convergent.
double schrodinger_residual(const FockSpaceSpec& space, const QuadraticGenerator& g,
                            const PhaseVector& v, double t, double dt);

}  // namespace mpdyn::fock
