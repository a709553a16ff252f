#include "mpdyn/oracle_suite.hpp"

#include "mpdyn/coherent_states.hpp"
#include "mpdyn/fock_oracle.hpp"
#include "mpdyn/measurement.hpp"
#include "mpdyn/phase_space.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace mpdyn::oracle {

namespace {

using fock::FockSpaceSpec;

struct Suite {
  std::vector<CheckResult> results;

  void add(std::string name, double value, double tolerance, std::string note = "") {
    results.push_back({std::move(name), value, tolerance, value <= tolerance, std::move(note)});
  }
  void add_bool(std::string name, bool ok, std::string note = "") {
    results.push_back({std::move(name), ok ? 0.0 : 1.0, 0.5, ok, std::move(note)});
  }

  // run a residual check, reporting guard trips as failures instead of throwing
  template <typename Fn>
  void guarded(std::string name, double tolerance, Fn&& fn) {
    try {
      double value = fn();
      add(std::move(name), value, tolerance);
    } catch (const NumericalGuardError& e) {
      results.push_back({std::move(name), std::numeric_limits<double>::infinity(), tolerance,
                         false, std::string("guard: ") + e.what()});
    }
  }
};

// canned single-mode instruction amplitudes, |v| <= 0.7
const std::vector<Complex> kCannedAmps = {
    {0.50, 0.00}, {0.00, 0.50}, {-0.30, 0.40}, {0.35, -0.35}, {0.70, 0.00},
    {0.20, 0.10}, {-0.15, -0.60}, {0.45, 0.30}, {-0.50, 0.20}, {0.10, 0.65},
};

}  // namespace

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport verify_all(int cutoff, std::optional<std::uint64_t> seed) {
  VerifyReport report;
  report.cutoff = cutoff;
  Suite suite;

  FockSpaceSpec one_mode(1, cutoff);
  int pair_cutoff = std::min(cutoff, 20);
  FockSpaceSpec two_mode(2, pair_cutoff);

  // ---- ladder algebra -------------------------------------------------
  {
    auto ops = fock::mode_operators(one_mode);
    const Matrix& a = ops[0].matrix;
    Matrix comm = a * a.adjoint() - a.adjoint() * a;
    // exact except on the top occupation level
    Index d = one_mode.dim();
    double dev = max_abs(comm.topLeftCorner(d - 1, d - 1) - Matrix::Identity(d - 1, d - 1));
    suite.add("ladder-commutator-interior", dev, 1e-12);

    Vector vac = fock::vacuum(one_mode).amplitudes;
    suite.add("vacuum-annihilation", (a * vac).norm(), 1e-15);
  }

  // ---- displacement ----------------------------------------------------
  suite.guarded("displacement-unitarity", 1e-10, [&] {
    Matrix u = fock::displacement(one_mode, PhaseVector{Complex(0.5, 0.0)}).matrix;
    return max_abs(u * u.adjoint() - Matrix::Identity(one_mode.dim(), one_mode.dim()));
  });

  suite.guarded("displaced-vacuum-amplitudes", 1e-10, [&] {
    // coherent amplitudes e^{-|v|^2/2} v^n / sqrt(n!)
    Complex v(0.5, 0.0);
    Vector st = fock::state_from_instructions(one_mode, PhaseVector{v}).amplitudes;
    double worst = 0.0;
    Complex expected = std::exp(-0.5 * std::norm(v));
    for (Index n = 0; n < std::min<Index>(one_mode.dim(), 12); ++n) {
      if (n > 0) expected *= v / std::sqrt(static_cast<double>(n));
      worst = std::max(worst, std::abs(st(n) - expected));
    }
    return worst;
  });

  suite.guarded("vacuum-overlap-law", 1e-9, [&] {
    double worst = 0.0;
    for (const Complex& amp : kCannedAmps) {
      PhaseVector v{amp * (1.0 / 0.7)};  // norms up to 1
      Vector st = fock::state_from_instructions(one_mode, v).amplitudes;
      worst = std::max(worst, std::abs(st(0) - std::exp(-0.5 * v.norm_sq())));
    }
    return worst;
  });

  suite.guarded("overlap-vs-closed-form", 1e-8, [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < kCannedAmps.size(); i += 2) {
      PhaseVector a{kCannedAmps[i]}, b{kCannedAmps[i + 1]};
      Vector sa = fock::state_from_instructions(one_mode, a).amplitudes;
      Vector sb = fock::state_from_instructions(one_mode, b).amplitudes;
      Complex numeric = sa.dot(sb);
      worst = std::max(worst, std::abs(numeric - overlap(a, b).value));
    }
    return worst;
  });

  // ---- Weyl relation ----------------------------------------------------
  {
    double worst = 0.0;
    bool sign_stable = true;
    int realized = 0;
    auto consume = [&](const PhaseVector& a, const PhaseVector& b) {
      fock::WeylCheck wc = fock::weyl_relation_check(one_mode, a, b);
      worst = std::max(worst, wc.best_residual);
      if (realized == 0) realized = wc.realized_sign;
      if (wc.realized_sign != realized) sign_stable = false;
    };
    try {
      for (std::size_t i = 0; i + 1 < kCannedAmps.size(); ++i) {
        consume(PhaseVector{kCannedAmps[i]}, PhaseVector{kCannedAmps[i + 1]});
      }
      if (seed) {
        Rng rng(*seed);
        for (int k = 0; k < 5; ++k) {
          consume(PhaseVector{rng.complex_in_disc(0.7)}, PhaseVector{rng.complex_in_disc(0.7)});
        }
      }
      std::ostringstream note;
      note << "sign " << (realized > 0 ? "+" : "-") << (sign_stable ? " stable" : " UNSTABLE");
      suite.add("weyl-relation", worst, 1e-8, note.str());
      suite.add_bool("weyl-sign-stable",
                     sign_stable && realized == fock::kWeylPhaseSign,
                     realized == fock::kWeylPhaseSign ? "matches module constant"
                                                      : "does NOT match module constant");
    } catch (const NumericalGuardError& e) {
      suite.results.push_back({"weyl-relation", std::numeric_limits<double>::infinity(), 1e-8,
                               false, std::string("guard: ") + e.what()});
    }
  }

  // ---- eigenvalue relation a_j|v> = v_j|v> -------------------------------
  suite.guarded("coherent-eigenvalue-relation", 1e-8, [&] {
    PhaseVector v{Complex(0.4, 0.3)};
    fock::FockVector st = fock::state_from_instructions(one_mode, v);
    auto ops = fock::mode_operators(one_mode);
    Vector res = ops[0].matrix * st.amplitudes - v[0] * st.amplitudes;
    // drop the top level: a|cutoff> has no image in the truncated space
    res(one_mode.dim() - 1) = 0.0;
    return res.norm();
  });

  // ---- number statistics on the vacuum-orthogonal state ------------------
  suite.guarded("number-stats-vs-closed-form", 1e-7, [&] {
    double worst = 0.0;
    for (double norm : {0.5, 1.0, 1.5}) {
      PhaseVector v{Complex(norm * 0.6, norm * 0.8)};
      fock::NumberStats ns = fock::number_statistics(fock::perp_state(one_mode, v));
      BeamStats bs = beam_stats(v);
      worst = std::max({worst, std::abs(ns.n_total - bs.nbar_total),
                        std::abs(ns.n2_total - bs.n2bar_total)});
    }
    return worst;
  });

  suite.guarded("perp-overlap-vs-closed-form", 1e-6, [&] {
    PhaseVector a{Complex(0.8, 0.3)}, b{Complex(-0.2, 0.9)};
    Vector pa = fock::perp_state(one_mode, a).amplitudes;
    Vector pb = fock::perp_state(one_mode, b).amplitudes;
    return std::abs(pa.dot(pb) - perp_overlap(a, b));
  });

  // ---- metaplectic conjugation -------------------------------------------
  const Vector eta = Vector::Constant(1, Complex(0.6, 0.8));  // |eta| = 1
  const QuadraticGenerator coupling = QuadraticGenerator::pair_coupling(eta);
  const PhaseVector probe{Complex(0.3, 0.0), Complex(0.0, 0.2)};
  const double coupling_time = 0.4;

  suite.guarded("unitary-conjugation", 1e-8, [&] {
    Matrix h(2, 2);
    h << Complex(1.0, 0.0), Complex(0.2, 0.1), Complex(0.2, -0.1), Complex(-0.5, 0.0);
    QuadraticGenerator g = QuadraticGenerator::rotation(h);
    FockSpaceSpec space(2, std::min(cutoff, 15));
    return fock::conjugation_check(space, g, 0.7, probe, false).residual;
  });

  {
    std::vector<double> residuals;
    std::vector<int> cuts;
    for (int c : {10, 15, 20}) cuts.push_back(std::min(c, pair_cutoff));
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    bool guard_hit = false;
    std::string guard_note;
    for (int c : cuts) {
      try {
        FockSpaceSpec space(2, c);
        residuals.push_back(
            fock::conjugation_check(space, coupling, coupling_time, probe, false).residual);
      } catch (const NumericalGuardError& e) {
        guard_hit = true;
        guard_note = e.what();
        break;
      }
    }
    if (guard_hit || residuals.empty()) {
      suite.results.push_back({"pair-conjugation", std::numeric_limits<double>::infinity(),
                               1e-6, false, "guard: " + guard_note});
    } else {
      std::ostringstream note;
      note << "cutoffs";
      for (std::size_t i = 0; i < residuals.size(); ++i) {
        char buf[40];
        std::snprintf(buf, sizeof buf, " %d:%.2e", cuts[i], residuals[i]);
        note << buf;
      }
      suite.add("pair-conjugation", residuals.back(), 1e-6, note.str());
      bool monotone = residuals.size() >= 2;
      for (std::size_t i = 0; i + 1 < residuals.size(); ++i) {
        monotone = monotone && residuals[i + 1] < residuals[i];
      }
      suite.add_bool("pair-conjugation-monotone", monotone, note.str());
    }
  }

  suite.guarded("bogoliubov-blocks", 1e-6, [&] {
    // residual is truncation-limited: ~2e-6 at per-mode cutoff 15, ~2e-7 at 18
    FockSpaceSpec space(2, std::min(cutoff, 18));
    return fock::bogoliubov_residual(space, coupling, coupling_time);
  });

  suite.guarded("metaplectic-unitarity", 1e-9, [&] {
    FockSpaceSpec space(2, std::min(cutoff, 15));
    Matrix vt = fock::metaplectic_unitary(space, coupling, coupling_time).matrix;
    return max_abs(vt * vt.adjoint() - Matrix::Identity(space.dim(), space.dim()));
  });

  // ---- factorization ------------------------------------------------------
  suite.guarded("factorization", 1e-9, [&] {
    FockSpaceSpec space(2, std::min(cutoff, 12));
    PhaseVector v{Complex(0.4, 0.0), Complex(0.3, 0.0)};
    fock::FactorizationCheck fc = fock::factorization_check(space, v, {{0}, {1}});
    return std::max({fc.product_residual, fc.reversed_residual, fc.commutator_residual});
  });

  // ---- generalized Schrodinger equation, unitary reduction ----------------
  {
    Matrix h(1, 1);
    h << Complex(1.0, 0.0);
    QuadraticGenerator g = QuadraticGenerator::rotation(h);
    PhaseVector v{Complex(0.5, 0.0)};
    try {
      double r1 = fock::schrodinger_residual(one_mode, g, v, 0.3, 1e-3);
      double r2 = fock::schrodinger_residual(one_mode, g, v, 0.3, 5e-4);
      double r3 = fock::schrodinger_residual(one_mode, g, v, 0.3, 2.5e-4);
      suite.add("schrodinger-residual", r1, 1e-6);
      bool second_order = r1 / r2 > 3.0 && r1 / r2 < 5.0 && r2 / r3 > 3.0 && r2 / r3 < 5.0;
      std::ostringstream note;
      char buf[64];
      std::snprintf(buf, sizeof buf, "ratios %.2f %.2f", r1 / r2, r2 / r3);
      note << buf;
      suite.add_bool("schrodinger-second-order", second_order, note.str());
    } catch (const NumericalGuardError& e) {
      suite.results.push_back({"schrodinger-residual", std::numeric_limits<double>::infinity(),
                               1e-6, false, std::string("guard: ") + e.what()});
    }
  }

  report.checks = std::move(suite.results);
  return report;
}

std::string format_table(const VerifyReport& report) {
  std::ostringstream os;
  os << "oracle verification (single-mode cutoff " << report.cutoff << ")\n";
  for (const CheckResult& c : report.checks) {
    char line[256];
    std::snprintf(line, sizeof line, "%-34s %-5s value=%-12.4e tol=%-9.1e %s\n", c.name.c_str(),
                  c.pass ? "pass" : "FAIL", c.value, c.tolerance, c.note.c_str());
    os << line;
  }
  os << (report.all_pass() ? "all checks passed" : "CHECKS FAILED") << "\n";
  return os.str();
}

}  // namespace mpdyn::oracle
