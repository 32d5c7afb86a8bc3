#include "zd/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "zd/simd/kernels.hpp"

namespace zd {
namespace {

// Dormand-Prince 5(4) tableau. The right-hand side is autonomous, so the
// node coefficients c_i are not needed.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b(5th order) - b(4th order)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw InvalidArgument("integrator tolerances must be positive");
  if (!(max_step > 0.0)) throw InvalidArgument("integrator max_step must be positive");
}

IntegratorStats integrate_dopri5(const ComplexRhs& rhs, std::span<cplx> y, double t0,
                                 std::span<const double> sample_times, const IntegratorConfig& cfg,
                                 const SampleHook& on_sample, const SampleHook& after_step) {
  cfg.validate();
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < t0 || (i > 0 && !(sample_times[i] > sample_times[i - 1]))) {
      throw InvalidArgument("sample times must be strictly increasing and not before the start time");
    }
  }

  const simd::KernelTable& kt = simd::active_kernels();
  const std::size_t n = y.size();
  IntegratorStats stats;

  std::array<std::vector<cplx>, 7> k;
  for (auto& v : k) v.assign(n, cplx(0.0));
  std::vector<cplx> stage(n), ynew(n), err(n), zero(n);

  auto eval = [&](std::span<const cplx> in, std::vector<cplx>& out) {
    rhs(in, out);
    ++stats.rhs_evals;
  };
  auto rms = [&](std::span<const cplx> v, std::span<const cplx> a, std::span<const cplx> b) {
    return std::sqrt(kt.scaled_err_sq(v, a, b, cfg.abs_tol, cfg.rel_tol) / static_cast<double>(n));
  };

  double t = t0;
  eval(y, k[0]);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    const double d0 = rms(y, y, y);
    const double d1 = rms(k[0], y, y);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, cfg.max_step);
    const std::array<double, 1> c{h0};
    const std::array<const cplx*, 1> terms{k[0].data()};
    kt.lincomb(y, c, terms, stage);
    eval(stage, k[1]);
    kt.lincomb(k[1], std::array<double, 1>{-1.0}, std::array<const cplx*, 1>{k[0].data()}, err);
    const double d2 = rms(err, y, y) / h0;
    const double h1 =
        std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 1.0 / 5.0);
    h = std::min({100.0 * h0, h1, cfg.max_step});
  }

  double err_old = 1e-4;
  for (double target : sample_times) {
    while (t < target) {
      const double remaining = target - t;
      bool hits_target = false;
      double h_step = std::min(h, cfg.max_step);
      if (h_step >= remaining || remaining - h_step < 1e-12 * std::max(1.0, std::abs(target))) {
        h_step = remaining;
        hits_target = true;
      }
      if (h_step < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
        throw SolverError("integrate_dopri5: step size underflow at t = " + std::to_string(t));
      }

      auto combo = [&](std::initializer_list<double> coeffs, std::vector<cplx>& out) {
        std::array<double, 6> c{};
        std::array<const cplx*, 6> terms{};
        std::size_t m = 0;
        std::size_t j = 0;
        for (double a : coeffs) {
          if (a != 0.0) {
            c[m] = h_step * a;
            terms[m] = k[j].data();
            ++m;
          }
          ++j;
        }
        kt.lincomb(y, std::span<const double>(c.data(), m), std::span<const cplx* const>(terms.data(), m), out);
      };

      combo({a21}, stage);
      eval(stage, k[1]);
      combo({a31, a32}, stage);
      eval(stage, k[2]);
      combo({a41, a42, a43}, stage);
      eval(stage, k[3]);
      combo({a51, a52, a53, a54}, stage);
      eval(stage, k[4]);
      combo({a61, a62, a63, a64, a65}, stage);
      eval(stage, k[5]);
      combo({b1, 0.0, b3, b4, b5, b6}, ynew);
      eval(ynew, k[6]);

      {
        const std::array<double, 6> c{h_step * e1, h_step * e3, h_step * e4, h_step * e5, h_step * e6, h_step * e7};
        const std::array<const cplx*, 6> terms{k[0].data(), k[2].data(), k[3].data(),
                                               k[4].data(), k[5].data(), k[6].data()};
        kt.lincomb(zero, c, terms, err);
      }
      const double err_norm = rms(err, y, ynew);

      if (err_norm <= 1.0) {
        ++stats.accepted;
        const double fac = err_norm == 0.0
                               ? kFacMax
                               : std::clamp(kSafety * std::pow(err_norm, -kAlpha) * std::pow(err_old, kBeta),
                                            kFacMin, kFacMax);
        err_old = std::max(err_norm, 1e-4);
        t = hits_target ? target : t + h_step;
        std::copy(ynew.begin(), ynew.end(), y.begin());
        std::swap(k[0], k[6]);
        if (after_step) {
          after_step(t, y);
          eval(y, k[0]);
        }
        const double h_new = h_step * fac;
        // A step shortened to land on a sample says little about the natural
        // step size; do not let it shrink the next proposal.
        h = hits_target ? std::max(h, h_new) : h_new;
      } else {
        ++stats.rejected;
        const double fac = std::isfinite(err_norm) ? std::max(kFacMin, kSafety * std::pow(err_norm, -kAlpha)) : kFacMin;
        h = std::min(h, h_step) * std::min(1.0, fac);
      }
    }
    if (on_sample) {
      on_sample(t, y);
      eval(y, k[0]);
    }
  }
  return stats;
}

}  // namespace zd
