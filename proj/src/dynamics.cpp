#include "noonsim/dynamics.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace noonsim {

namespace {

constexpr double kSeriesThreshold = 1e-6;

struct RabiTerms {
  double cos_term;   // cos(delta tau)
  double sinc_term;  // sin(delta tau) / delta
};

RabiTerms rabi_terms(double delta, double tau) {
  const double x = delta * tau;
  if (std::abs(x) < kSeriesThreshold) {
    const double x2 = x * x;
    return {1.0 - x2 / 2.0, tau * (1.0 - x2 / 6.0)};
  }
  return {std::cos(x), std::sin(x) / delta};
}

double coupling(int n) { return std::sqrt(static_cast<double>(n + 1) * (n + 2)); }

}  // namespace

double gamma_n(int n, const Params& p) { return (p.delta + p.chi * (n + 1)) / 2.0; }

double delta_n(int n, const Params& p) {
  if (n < -2) throw std::domain_error("delta_n is defined for n >= -2");
  const double g = gamma_n(n, p);
  const double radicand = g * g + static_cast<double>(n + 1) * (n + 2);
  if (radicand < 0.0) throw std::logic_error("negative radicand in delta_n");
  return std::sqrt(radicand);
}

Complex c_coefficient(int n, double tau, const Params& p) {
  const auto t = rabi_terms(delta_n(n, p), tau);
  return {t.cos_term, -gamma_n(n, p) * t.sinc_term};
}

double s_coefficient(int n, double tau, const Params& p) {
  return rabi_terms(delta_n(n, p), tau).sinc_term;
}

PropagatorCoefficients coefficients(int n, double tau, const Params& p) {
  if (n < 0) throw std::domain_error("propagator coefficients are defined for n >= 0");
  return {c_coefficient(n, tau, p), std::conj(c_coefficient(n - 2, tau, p)),
          s_coefficient(n, tau, p), std::polar(1.0, p.chi * tau / 2.0)};
}

JointState evolve_cavity(const JointState& s, Cavity cavity, double tau, const Params& p) {
  if (s.cutoff() != p.cutoff) {
    throw CutoffMismatch("state cutoff " + std::to_string(s.cutoff()) +
                         " does not match parameter cutoff " + std::to_string(p.cutoff));
  }
  const double leak = boundary_leakage(s, 2);
  if (leak > kLeakageLimit) {
    std::ostringstream msg;
    msg << "cannot evolve cavity " << to_string(cavity) << ": boundary mass " << leak
        << " within two quanta of cutoff " << s.cutoff();
    throw LeakageError(msg.str(), leak);
  }

  const int cutoff = s.cutoff();
  const auto modes = static_cast<std::size_t>(cutoff + 1);

  // Per-photon-number matrix elements, shared by every spectator index.
  std::vector<Complex> upper(modes);
  std::vector<Complex> lower(modes);
  std::vector<Complex> flip(modes);  // -i sqrt((n+1)(n+2)) S_n
  for (int n = 0; n <= cutoff; ++n) {
    if (n + 2 <= cutoff) {
      const auto c = coefficients(n, tau, p);
      upper[n] = c.c_upper;
      flip[n] = Complex{0.0, -coupling(n) * c.s_val};
    } else {
      // |e, n> has no partner inside the truncated space; it only picks up
      // its diagonal phase, exp(-i Gamma_n tau) relative to the global phase.
      upper[n] = std::polar(1.0, -gamma_n(n, p) * tau);
    }
  }
  lower[0] = std::conj(c_coefficient(-2, tau, p));
  if (cutoff >= 1) lower[1] = std::conj(c_coefficient(-1, tau, p));
  for (int m = 2; m <= cutoff; ++m) lower[m] = std::conj(upper[m - 2]);

  const Complex phase = std::polar(1.0, p.chi * tau / 2.0);
  JointState out(cutoff);
  for (int spectator = 0; spectator <= cutoff; ++spectator) {
    auto get = [&](const JointState& st, AtomLevel level, int n) {
      return cavity == Cavity::A ? st.amplitude(level, n, spectator)
                                 : st.amplitude(level, spectator, n);
    };
    auto put = [&](AtomLevel level, int n, Complex value) {
      if (cavity == Cavity::A) {
        out.amplitude(level, n, spectator) = phase * value;
      } else {
        out.amplitude(level, spectator, n) = phase * value;
      }
    };
    for (int n = 0; n <= cutoff; ++n) {
      const Complex e = get(s, AtomLevel::Excited, n);
      if (n + 2 <= cutoff) {
        const Complex g = get(s, AtomLevel::Ground, n + 2);
        put(AtomLevel::Excited, n, upper[n] * e + flip[n] * g);
        put(AtomLevel::Ground, n + 2, flip[n] * e + lower[n + 2] * g);
      } else {
        put(AtomLevel::Excited, n, upper[n] * e);
      }
    }
    for (int m = 0; m < 2 && m <= cutoff; ++m) {
      put(AtomLevel::Ground, m, lower[m] * get(s, AtomLevel::Ground, m));
    }
  }
  return out;
}

JointState rotate_atom(const JointState& s, double theta) {
  const double c = std::cos(theta / 2.0);
  const double sn = std::sin(theta / 2.0);
  JointState out(s.cutoff());
  const auto e = s.block(AtomLevel::Excited);
  const auto g = s.block(AtomLevel::Ground);
  auto e_out = out.block(AtomLevel::Excited);
  auto g_out = out.block(AtomLevel::Ground);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e_out[i] = c * e[i] - sn * g[i];
    g_out[i] = sn * e[i] + c * g[i];
  }
  return out;
}

}  // namespace noonsim
