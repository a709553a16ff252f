// phase_space.hpp — complex phase-space points, quadratic generators, and
// the linear canonical (Bogoliubov) flows they generate.
//
// Conventions used throughout:
//   * mode amplitudes psi_j = (p_j + i q_j)/sqrt(2), hbar = 1;
//   * a generator is the real quadratic form
//       Gamma = psi* . H psi + psi* . W psi* + psi . conj(W) psi,
//     H hermitian, W symmetric;
//   * flows solve d(psi)/dt = -i dGamma/d(psi*) — on the doubled coordinate
//     xi = (psi, psi*) this is d(xi)/dt = -i G xi with
//       G = [[ H, 2W ], [ -2 conj(W), -conj(H) ]];
//   * a finite flow acts as psi -> A psi + B psi*, with
//       A A^dag - B B^dag = I  and  A B^T = B A^T,
//     which is exactly the condition that Im(phi* . psi) is preserved.

#pragma once

#include "mpdyn/common.hpp"

namespace mpdyn {

// ---------------------------------------------------------------- PhaseVector

// A point in n-mode complex phase space (equivalently, a wave-function in the
// discrete basis). Immutable after construction; components must be finite.
class PhaseVector {
 public:
  explicit PhaseVector(Vector components);
  PhaseVector(std::initializer_list<Complex> components);

  static PhaseVector zero(Index n_modes);

  Index modes() const { return components_.size(); }
  const Vector& components() const { return components_; }
  Complex operator[](Index j) const { return components_(j); }

  double norm() const { return components_.norm(); }
  double norm_sq() const { return components_.squaredNorm(); }

  // psi-hat = psi/|psi|; rejects the vacuum
  PhaseVector unit() const;

  // canonical coordinates: p_j = sqrt(2) Re psi_j, q_j = sqrt(2) Im psi_j
  RealVector momenta() const;
  RealVector positions() const;

 private:
  Vector components_;
};

// ---------------------------------------------------------- QuadraticGenerator

// The pair (H, W) defining Gamma. Construction symmetrizes both parts and
// rejects inputs whose asymmetry exceeds 1e-12 relative, so that H = H^dag
// and W = W^T hold exactly as stored.
class QuadraticGenerator {
 public:
  QuadraticGenerator(Matrix hermitian_part, Matrix squeeze_part);

  // pure rotation generator (W = 0): flows stay in the unitary subgroup
  static QuadraticGenerator rotation(Matrix hermitian_part);
  // pure squeeze generator (H = 0)
  static QuadraticGenerator squeeze(Matrix squeeze_part);
  // Object-device amplification coupling for n pairs on 2n modes; pair j
  // couples mode j (object) with mode n+j (device). The squeeze entries are
  // i*eta_j/2, which makes the flow of this generator the hyperbolic orbit
  //   lambda_t = lambda cosh(|eta|t) + conj(mu) e^{i arg eta} sinh(|eta|t),
  //   mu_t     = mu     cosh(|eta|t) + conj(lambda) e^{i arg eta} sinh(|eta|t).
  static QuadraticGenerator pair_coupling(const Vector& eta);

  Index modes() const { return hermitian_.rows(); }
  const Matrix& hermitian_part() const { return hermitian_; }
  const Matrix& squeeze_part() const { return squeeze_; }
  bool is_rotation() const { return max_abs(squeeze_) == 0.0; }

 private:
  Matrix hermitian_;
  Matrix squeeze_;
};

// ----------------------------------------------------------- LinearCanonicalMap

// One metaplectic group element: psi -> A psi + B psi*. Construction checks
// shapes only; maps produced by flow() satisfy the Bogoliubov invariants,
// which verify_symplectic() measures (hand-built invalid maps are allowed so
// the diagnostic has something to report).
class LinearCanonicalMap {
 public:
  LinearCanonicalMap(Matrix block_a, Matrix block_b);

  static LinearCanonicalMap identity(Index n_modes);

  Index modes() const { return a_.rows(); }
  const Matrix& block_a() const { return a_; }
  const Matrix& block_b() const { return b_; }

 private:
  Matrix a_;
  Matrix b_;
};

// ------------------------------------------------------------------ operations

// The doubled 2n x 2n matrix G with d(xi)/dt = -i G xi on xi = (psi, psi*).
// Layout: rows/cols 0..n-1 are psi, n..2n-1 are psi*.
Matrix adjoint_generator(const QuadraticGenerator& g);

// exp(-i t G) reshaped into (A, B); flow(g, 0) is the identity map.
// Throws NumericalGuardError if the exponential is not finite.
LinearCanonicalMap flow(const QuadraticGenerator& g, double t);

// psi -> A psi + B psi*
PhaseVector apply(const LinearCanonicalMap& m, const PhaseVector& v);

// m2 after m1
LinearCanonicalMap compose(const LinearCanonicalMap& m2, const LinearCanonicalMap& m1);

// Independent fixed-step RK4 integration of the doubled ODE; converges to
// apply(flow(g, t), v) at rate O(steps^-4). Used as the oracle for flow().
PhaseVector ode_flow(const QuadraticGenerator& g, const PhaseVector& v, double t, int steps);

struct SymplecticDiagnostics {
  double heisenberg_residual;  // max |A A^dag - B B^dag - I|
  double symmetry_residual;    // max |A B^T - B A^T|
  double bracket_residual;     // max deviation of Im(phi* . psi) over probes
  double max_residual() const;
};

// Deviation of a map from the canonical-structure invariants, including
// Im(phi* . psi) preservation over a deterministic probe set of vector pairs.
SymplecticDiagnostics verify_symplectic(const LinearCanonicalMap& m);

}  // namespace mpdyn
