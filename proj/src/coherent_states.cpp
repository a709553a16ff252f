#include "mpdyn/coherent_states.hpp"

namespace mpdyn {

namespace {

void require_same_modes(const PhaseVector& a, const PhaseVector& b, const char* who) {
  if (a.modes() != b.modes()) {
    throw std::invalid_argument(std::string(who) + ": dimension mismatch");
  }
}

// 1 - e^{-x} without cancellation for small x
double one_minus_exp_neg(double x) { return -std::expm1(-x); }

}  // namespace

double weyl_phase(const PhaseVector& a, const PhaseVector& b) {
  require_same_modes(a, b, "weyl_phase");
  // Eigen's dot conjugates the first argument
  return std::imag(a.components().dot(b.components()));
}

OverlapValue overlap(const PhaseVector& a, const PhaseVector& b) {
  require_same_modes(a, b, "overlap");
  OverlapValue ov;
  ov.phase = weyl_phase(a, b);
  ov.magnitude = std::exp(-0.5 * (a.components() - b.components()).squaredNorm());
  ov.value = std::polar(ov.magnitude, ov.phase);
  return ov;
}

double intensity(const PhaseVector& v) { return v.norm_sq(); }

Complex perp_overlap(const PhaseVector& a, const PhaseVector& b) {
  require_same_modes(a, b, "perp_overlap");
  double na2 = a.norm_sq();
  double nb2 = b.norm_sq();
  double da = one_minus_exp_neg(na2);
  double db = one_minus_exp_neg(nb2);
  if (na2 == 0.0 || nb2 == 0.0 || da == 0.0 || db == 0.0) {
    throw std::invalid_argument("perp_overlap: undefined at the vacuum (zero-norm input)");
  }
  Complex numerator = overlap(a, b).value - std::exp(-0.5 * (na2 + nb2));
  return numerator / std::sqrt(da * db);
}

BeamStats beam_stats(const PhaseVector& v) {
  double total = v.norm_sq();
  if (total == 0.0) {
    throw std::invalid_argument("beam_stats: undefined at the vacuum (zero-norm input)");
  }
  double e = one_minus_exp_neg(total);

  Index n = v.modes();
  BeamStats st;
  st.nbar_k.resize(n);
  st.var_k.resize(n);
  for (Index k = 0; k < n; ++k) {
    double ik = std::norm(v[k]);
    double nbar = ik / e;
    double n2 = (ik * ik + ik) / e;
    st.nbar_k(k) = nbar;
    st.var_k(k) = n2 - nbar * nbar;
  }
  st.nbar_total = total / e;
  st.n2bar_total = (total * total + total) / e;
  st.marker = std::sqrt(st.n2bar_total - st.nbar_total * st.nbar_total) / st.nbar_total;
  return st;
}

MarkerScan marker_scan(double norm_min, double norm_max, double step) {
  if (!(norm_min > 0.0) || !(norm_max > norm_min) || !(step > 0.0)) {
    throw std::invalid_argument("marker_scan: need 0 < norm_min < norm_max and step > 0");
  }
  MarkerScan scan;
  scan.max_marker = -1.0;
  scan.argmax_norm = norm_min;
  // grid points computed as norm_min + k*step (no accumulation drift)
  auto count = static_cast<long long>(std::floor((norm_max - norm_min) / step + 1e-9));
  scan.curve.reserve(static_cast<std::size_t>(count) + 1);
  for (long long k = 0; k <= count; ++k) {
    double x = norm_min + static_cast<double>(k) * step;
    double s = x * x;
    // single-mode total marker: sqrt((1 - e^{-s})/s - e^{-s})
    double m = std::sqrt(one_minus_exp_neg(s) / s - std::exp(-s));
    scan.curve.push_back({x, m});
    if (m > scan.max_marker) {
      scan.max_marker = m;
      scan.argmax_norm = x;
    }
  }
  return scan;
}

}  // namespace mpdyn
