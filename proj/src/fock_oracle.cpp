#include "mpdyn/fock_oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <sstream>

namespace mpdyn::fock {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Matrix checked_exp(const Matrix& exponent, const char* who) {
  Matrix result = exponent.exp();
  if (!all_finite(result)) {
    std::ostringstream os;
    os << who << ": matrix exponential did not converge (||X||_max = " << max_abs(exponent)
       << ")";
    throw NumericalGuardError(os.str());
  }
  return result;
}

// single-mode ladder: a|n> = sqrt(n)|n-1>
Matrix single_mode_annihilator(Index local_dim) {
  Matrix a = Matrix::Zero(local_dim, local_dim);
  for (Index n = 1; n < local_dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

// kron with mode 0 as the slow index
Matrix kron(const Matrix& slow, const Matrix& fast) {
  Matrix out(slow.rows() * fast.rows(), slow.cols() * fast.cols());
  for (Index i = 0; i < slow.rows(); ++i)
    for (Index j = 0; j < slow.cols(); ++j)
      out.block(i * fast.rows(), j * fast.cols(), fast.rows(), fast.cols()) = slow(i, j) * fast;
  return out;
}

double edge_mass(const FockSpaceSpec& space, const Vector& amplitudes) {
  double mass = 0.0;
  for (Index i = 0; i < amplitudes.size(); ++i) {
    for (int m = 0; m < space.n_modes; ++m) {
      if (space.occupation(i, m) == space.cutoff) {
        mass += std::norm(amplitudes(i));
        break;
      }
    }
  }
  return mass;
}

void check_space_match(const FockSpaceSpec& a, const FockSpaceSpec& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": Fock space mismatch");
}

}  // namespace

// ----------------------------------------------------------------- FockSpaceSpec

FockSpaceSpec::FockSpaceSpec(int n_modes_, int cutoff_, Index dim_limit_)
    : n_modes(n_modes_), cutoff(cutoff_), dim_limit(dim_limit_) {
  require(n_modes >= 1, "FockSpaceSpec: need at least one mode");
  require(cutoff >= 1, "FockSpaceSpec: cutoff must be >= 1");
  require(dim_limit >= 2, "FockSpaceSpec: dimension limit too small");
  // overflow-safe dimension check
  Index d = 1;
  for (int m = 0; m < n_modes; ++m) {
    if (d > dim_limit / (cutoff + 1)) {
      throw std::invalid_argument("FockSpaceSpec: dimension limit exceeded");
    }
    d *= cutoff + 1;
  }
  if (d > dim_limit) throw std::invalid_argument("FockSpaceSpec: dimension limit exceeded");
}

Index FockSpaceSpec::dim() const {
  Index d = 1;
  for (int m = 0; m < n_modes; ++m) d *= local_dim();
  return d;
}

int FockSpaceSpec::occupation(Index index, int mode) const {
  Index divisor = 1;
  for (int m = n_modes - 1; m > mode; --m) divisor *= local_dim();
  return static_cast<int>((index / divisor) % local_dim());
}

// ------------------------------------------------------------------ construction

std::vector<FockOperator> mode_operators(const FockSpaceSpec& space) {
  Index d = space.local_dim();
  Matrix a = single_mode_annihilator(d);
  Matrix id = Matrix::Identity(d, d);
  std::vector<FockOperator> ops;
  ops.reserve(space.n_modes);
  for (int m = 0; m < space.n_modes; ++m) {
    Matrix op = (m == 0) ? a : id;
    for (int k = 1; k < space.n_modes; ++k) {
      op = kron(op, (k == m) ? a : id);
    }
    ops.push_back({std::move(op), space});
  }
  return ops;
}

FockOperator number_operator(const FockSpaceSpec& space, int mode) {
  require(mode >= 0 && mode < space.n_modes, "number_operator: mode out of range");
  // diagonal in the occupation basis; built directly
  Vector diag(space.dim());
  for (Index i = 0; i < space.dim(); ++i) diag(i) = space.occupation(i, mode);
  return {Matrix(diag.asDiagonal()), space};
}

FockOperator total_number_operator(const FockSpaceSpec& space) {
  Vector diag(space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    int total = 0;
    for (int m = 0; m < space.n_modes; ++m) total += space.occupation(i, m);
    diag(i) = total;
  }
  return {Matrix(diag.asDiagonal()), space};
}

FockVector vacuum(const FockSpaceSpec& space) {
  Vector amp = Vector::Zero(space.dim());
  amp(0) = 1.0;
  return {std::move(amp), space, 0.0};
}

FockVector apply(const FockOperator& op, const FockVector& state) {
  check_space_match(op.space, state.space, "apply");
  Vector amp = op.matrix * state.amplitudes;
  double tail = edge_mass(state.space, amp);
  return {std::move(amp), state.space, tail};
}

FockOperator displacement(const FockSpaceSpec& space, const PhaseVector& v) {
  require(v.modes() == space.n_modes, "displacement: mode count mismatch");
  auto ops = mode_operators(space);
  Matrix exponent = Matrix::Zero(space.dim(), space.dim());
  for (int m = 0; m < space.n_modes; ++m) {
    exponent += v[m] * ops[m].matrix.adjoint() - std::conj(v[m]) * ops[m].matrix;
  }
  FockOperator u{checked_exp(exponent, "displacement"), space};

  // guard: the displaced vacuum must sit safely inside the truncation
  Vector displaced = u.matrix.col(0);
  double tail = edge_mass(space, displaced);
  if (tail > kTailGuard) {
    std::ostringstream os;
    os << "displacement: displaced vacuum has edge mass " << tail << " > " << kTailGuard
       << " (raise the cutoff or shrink |v|)";
    throw NumericalGuardError(os.str());
  }
  return u;
}

FockVector state_from_instructions(const FockSpaceSpec& space, const PhaseVector& v) {
  FockOperator u = displacement(space, v);
  Vector amp = u.matrix.col(0);
  return {std::move(amp), space, edge_mass(space, amp)};
}

FockVector perp_state(const FockSpaceSpec& space, const PhaseVector& v) {
  require(v.norm() > 0.0, "perp_state: undefined at the vacuum");
  FockVector st = state_from_instructions(space, v);
  Vector amp = st.amplitudes;
  amp(0) = 0.0;  // <0|v>|0> removed; vacuum is the first basis state
  double n = amp.norm();
  if (n == 0.0) throw NumericalGuardError("perp_state: no vacuum-orthogonal component");
  amp /= n;
  return {std::move(amp), space, edge_mass(space, amp)};
}

FockOperator normal_ordered_generator(const FockSpaceSpec& space, const QuadraticGenerator& g) {
  require(g.modes() == space.n_modes, "normal_ordered_generator: mode count mismatch");
  auto ops = mode_operators(space);
  const Matrix& h = g.hermitian_part();
  const Matrix& w = g.squeeze_part();
  Matrix out = Matrix::Zero(space.dim(), space.dim());
  for (int j = 0; j < space.n_modes; ++j) {
    for (int k = 0; k < space.n_modes; ++k) {
      if (h(j, k) != 0.0) out += h(j, k) * ops[j].matrix.adjoint() * ops[k].matrix;
      if (w(j, k) != 0.0) {
        out += w(j, k) * ops[j].matrix.adjoint() * ops[k].matrix.adjoint();
        out += std::conj(w(j, k)) * ops[j].matrix * ops[k].matrix;
      }
    }
  }
  return {std::move(out), space};
}

FockOperator metaplectic_unitary(const FockSpaceSpec& space, const QuadraticGenerator& g,
                                 double t) {
  FockOperator gen = normal_ordered_generator(space, g);
  return {checked_exp(-kImag * t * gen.matrix, "metaplectic_unitary"), space};
}

// ------------------------------------------------------------------ diagnostics

Matrix interior_band_projector(const FockSpaceSpec& space) {
  int band = space.cutoff / 2;
  Vector diag = Vector::Zero(space.dim());
  for (Index i = 0; i < space.dim(); ++i) {
    bool inside = true;
    for (int m = 0; m < space.n_modes; ++m) {
      if (space.occupation(i, m) > band) {
        inside = false;
        break;
      }
    }
    if (inside) diag(i) = 1.0;
  }
  return Matrix(diag.asDiagonal());
}

WeylCheck weyl_relation_check(const FockSpaceSpec& space, const PhaseVector& a,
                              const PhaseVector& b) {
  require(a.modes() == space.n_modes && b.modes() == space.n_modes,
          "weyl_relation_check: mode count mismatch");
  Matrix ua = displacement(space, a).matrix;
  Matrix ub = displacement(space, b).matrix;
  Matrix usum = displacement(space, PhaseVector(a.components() + b.components())).matrix;

  double theta = std::imag(a.components().dot(b.components()));
  Matrix p = interior_band_projector(space);
  Matrix prod = ua * ub;

  WeylCheck check{};
  check.residual_plus = (p * (usum - std::polar(1.0, +theta) * prod) * p).norm();
  check.residual_minus = (p * (usum - std::polar(1.0, -theta) * prod) * p).norm();
  check.realized_sign = (check.residual_plus <= check.residual_minus) ? +1 : -1;
  check.best_residual = std::min(check.residual_plus, check.residual_minus);
  return check;
}

ConjugationCheck conjugation_check(const FockSpaceSpec& space, const QuadraticGenerator& g,
                                   double t, const PhaseVector& v, bool enforce_guards) {
  require(g.modes() == space.n_modes, "conjugation_check: mode count mismatch");
  require(v.modes() == space.n_modes, "conjugation_check: mode count mismatch");

  LinearCanonicalMap m = flow(g, t);
  PhaseVector mv = mpdyn::apply(m, v);

  auto displacement_matrix = [&](const PhaseVector& p) -> Matrix {
    auto ops = mode_operators(space);
    Matrix exponent = Matrix::Zero(space.dim(), space.dim());
    for (int mm = 0; mm < space.n_modes; ++mm) {
      exponent += p[mm] * ops[mm].matrix.adjoint() - std::conj(p[mm]) * ops[mm].matrix;
    }
    return checked_exp(exponent, "conjugation_check");
  };

  Matrix u_v, u_mv;
  if (enforce_guards) {
    u_v = displacement(space, v).matrix;
    u_mv = displacement(space, mv).matrix;
  } else {
    u_v = displacement_matrix(v);
    u_mv = displacement_matrix(mv);
  }

  Matrix vt = metaplectic_unitary(space, g, t).matrix;
  Vector vac = Vector::Zero(space.dim());
  vac(0) = 1.0;

  Vector lhs = u_mv.col(0);                        // U(M_t v)|0>
  Vector rhs = vt * (u_v * (vt.adjoint() * vac));  // V_t U(v) V_t^dag |0>

  ConjugationCheck check{};
  check.residual = (lhs - rhs).norm();
  Complex inner = rhs.dot(lhs);
  check.phase = std::arg(inner);
  check.residual_mod_phase = (lhs - std::polar(1.0, check.phase) * rhs).norm();
  return check;
}

double bogoliubov_residual(const FockSpaceSpec& space, const QuadraticGenerator& g, double t) {
  require(g.modes() == space.n_modes, "bogoliubov_residual: mode count mismatch");
  LinearCanonicalMap m = flow(g, t);
  Matrix vt = metaplectic_unitary(space, g, t).matrix;
  auto ops = mode_operators(space);

  // Operator-norm comparisons are dominated by truncation-edge junk (a
  // squeeze spreads band-edge states across the cutoff with O(1) weight), so
  // the transform is checked on tail-guarded probe states instead.
  std::vector<Vector> probes;
  probes.push_back(vacuum(space).amplitudes);
  Vector small1 = Vector::Constant(space.n_modes, Complex(0.15, 0.05));
  Vector small2 = Vector::Constant(space.n_modes, Complex(-0.05, 0.2));
  probes.push_back(state_from_instructions(space, PhaseVector(small1)).amplitudes);
  probes.push_back(state_from_instructions(space, PhaseVector(small2)).amplitudes);

  double worst = 0.0;
  for (int j = 0; j < space.n_modes; ++j) {
    Matrix expected = Matrix::Zero(space.dim(), space.dim());
    for (int k = 0; k < space.n_modes; ++k) {
      expected += m.block_a()(j, k) * ops[k].matrix;
      expected += m.block_b()(j, k) * ops[k].matrix.adjoint();
    }
    for (const Vector& probe : probes) {
      Vector lhs = vt.adjoint() * (ops[j].matrix * (vt * probe));
      Vector rhs = expected * probe;
      worst = std::max(worst, (lhs - rhs).norm());
    }
  }
  return worst;
}

NumberStats number_statistics(const FockVector& state) {
  if (!state.truncation_reliable()) {
    std::ostringstream os;
    os << "number_statistics: state tail mass " << state.tail_mass << " exceeds guard "
       << kTailGuard;
    throw NumericalGuardError(os.str());
  }
  const FockSpaceSpec& space = state.space;
  NumberStats st;
  st.n_k.resize(space.n_modes);
  st.n2_k.resize(space.n_modes);
  st.n_total = 0.0;
  st.n2_total = 0.0;
  // all number operators are diagonal here, so expectations are plain sums
  for (int m = 0; m < space.n_modes; ++m) {
    double n1 = 0.0, n2 = 0.0;
    for (Index i = 0; i < space.dim(); ++i) {
      double occ = space.occupation(i, m);
      double w = std::norm(state.amplitudes(i));
      n1 += occ * w;
      n2 += occ * occ * w;
    }
    st.n_k(m) = n1;
    st.n2_k(m) = n2;
  }
  for (Index i = 0; i < space.dim(); ++i) {
    double total = 0.0;
    for (int m = 0; m < space.n_modes; ++m) total += space.occupation(i, m);
    double w = std::norm(state.amplitudes(i));
    st.n_total += total * w;
    st.n2_total += total * total * w;
  }
  return st;
}

FactorizationCheck factorization_check(const FockSpaceSpec& space, const PhaseVector& v,
                                       const std::vector<std::vector<int>>& partition) {
  require(v.modes() == space.n_modes, "factorization_check: mode count mismatch");
  std::vector<bool> seen(space.n_modes, false);
  for (const auto& block : partition) {
    for (int mode : block) {
      require(mode >= 0 && mode < space.n_modes, "factorization_check: mode out of range");
      if (seen[mode])
        throw std::invalid_argument("factorization_check: overlapping partition rejected");
      seen[mode] = true;
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end())
    throw std::invalid_argument("factorization_check: partition must cover every mode");

  Matrix full = displacement(space, v).matrix;

  std::vector<Matrix> factors;
  factors.reserve(partition.size());
  for (const auto& block : partition) {
    Vector restricted = Vector::Zero(space.n_modes);
    for (int mode : block) restricted(mode) = v[mode];
    factors.push_back(displacement(space, PhaseVector(restricted)).matrix);
  }

  Index d = space.dim();
  Matrix forward = Matrix::Identity(d, d);
  for (const auto& f : factors) forward = forward * f;
  Matrix backward = Matrix::Identity(d, d);
  for (auto it = factors.rbegin(); it != factors.rend(); ++it) backward = backward * (*it);

  FactorizationCheck check{};
  check.product_residual = (full - forward).norm();
  check.reversed_residual = (full - backward).norm();
  check.commutator_residual = 0.0;
  Vector vac = Vector::Zero(d);
  vac(0) = 1.0;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (std::size_t j = i + 1; j < factors.size(); ++j) {
      Vector comm = factors[i] * (factors[j] * vac) - factors[j] * (factors[i] * vac);
      check.commutator_residual = std::max(check.commutator_residual, comm.norm());
    }
  }
  return check;
}

double schrodinger_residual(const FockSpaceSpec& space, const QuadraticGenerator& g,
                            const PhaseVector& v, double t, double dt) {
  require(g.is_rotation(), "schrodinger_residual: generator must have W = 0");
  require(dt > 0.0, "schrodinger_residual: dt must be positive");

  auto state_at = [&](double s) -> Vector {
    PhaseVector moved = mpdyn::apply(flow(g, s), v);
    return state_from_instructions(space, moved).amplitudes;
  };

  Vector derivative = (state_at(t + dt) - state_at(t - dt)) / (2.0 * dt);
  Matrix hop = normal_ordered_generator(space, g).matrix;
  Vector residual = derivative + kImag * (hop * state_at(t));
  return residual.norm();
}

}  // namespace mpdyn::fock
