// common.hpp — shared scalar/matrix aliases, error types, deterministic RNG

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace mpdyn {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kImag{0.0, 1.0};

// Raised when a computation leaves the numerically trustworthy regime
// (truncation tail guard, non-finite matrix exponential, ...). The CLI maps
// this to exit code 3; plain contract violations throw std::invalid_argument
// and map to exit code 2.
class NumericalGuardError : public std::runtime_error {
 public:
  explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }
inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// max |entry| — the norm used for "max deviation" style diagnostics
inline double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Deterministic RNG for probe sets and property tests. mt19937_64 is fully
// specified by the standard; the uniform mapping avoids std::*_distribution,
// whose output differs between standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  // uniform in [lo, hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  Complex complex_in_disc(double radius) {
    // rejection-free: uniform modulus^2 and phase
    double r = radius * std::sqrt(uniform());
    double ph = 2.0 * M_PI * uniform();
    return std::polar(r, ph);
  }
  Vector complex_vector(Index n, double scale) {
    Vector v(n);
    for (Index i = 0; i < n; ++i)
      v(i) = Complex(uniform(-scale, scale), uniform(-scale, scale));
    return v;
  }
  Matrix complex_matrix(Index rows, Index cols, double scale) {
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        m(i, j) = Complex(uniform(-scale, scale), uniform(-scale, scale));
    return m;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mpdyn
