// Copyright 2026 The qchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Adaptive Dormand-Prince 5(4) integrator for y' = f(y) with matrix-valued
// state. Steps are clipped so that every requested output time is hit
// exactly; no interpolation.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>

#include "qchain/types.hpp"

namespace qchain {

struct IntegratorOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0: pick from the initial derivative
  double min_step = 1e-12;
  double max_step = 0.0;      // 0: unlimited
  long max_steps = 50'000'000;
};

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double t_reached) : Error(what), t_reached_(t_reached) {}
  [[nodiscard]] double t_reached() const noexcept { return t_reached_; }

 private:
  double t_reached_;
};

namespace detail {

// Dormand & Prince (1980) tableau.
struct DoPri5 {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b* (error weights)
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;
};

inline double error_norm(const Matrix& err, const Matrix& y0, const Matrix& y1, double atol, double rtol) {
  double worst = 0.0;
  for (Index k = 0; k < err.size(); ++k) {
    const double scale = atol + rtol * std::max(std::abs(y0.data()[k]), std::abs(y1.data()[k]));
    worst = std::max(worst, std::abs(err.data()[k]) / scale);
  }
  return worst;
}

}  // namespace detail

// Integrates from t0 through the ascending `outputs` (all > t0). The
// observer is called as observer(t, y) at each output time and may return
// false to stop early. Returns the time reached.
template <class Rhs, class Observer>
double integrate_dopri5(Rhs&& f, Matrix y, double t0, std::span<const double> outputs, Observer&& observer,
                        const IntegratorOptions& opt = {}, IntegratorStats* stats = nullptr) {
  using T = detail::DoPri5;
  IntegratorStats local;
  IntegratorStats& st = stats ? *stats : local;

  double t = t0;
  Matrix k1 = f(y);
  ++st.rhs_evaluations;

  double h = opt.initial_step;
  if (h <= 0.0) {
    const double d0 = y.cwiseAbs().maxCoeff();
    const double d1 = k1.cwiseAbs().maxCoeff();
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-3 : 0.01 * d0 / d1;
  }

  Matrix k2, k3, k4, k5, k6, k7, y_new, y_stage;
  for (double target : outputs) {
    if (!(target > t)) throw std::invalid_argument("integrate_dopri5: output times must be increasing and > t0");
    while (t < target) {
      if (opt.max_step > 0.0) h = std::min(h, opt.max_step);
      double step = h;
      bool last = false;
      if (t + step >= target) {
        step = target - t;
        last = true;
      }
      if (st.accepted + st.rejected >= opt.max_steps) {
        throw IntegrationError("integrate_dopri5: step budget exhausted at t = " + std::to_string(t), t);
      }

      y_stage = y + step * (T::a21 * k1);
      k2 = f(y_stage);
      y_stage = y + step * (T::a31 * k1 + T::a32 * k2);
      k3 = f(y_stage);
      y_stage = y + step * (T::a41 * k1 + T::a42 * k2 + T::a43 * k3);
      k4 = f(y_stage);
      y_stage = y + step * (T::a51 * k1 + T::a52 * k2 + T::a53 * k3 + T::a54 * k4);
      k5 = f(y_stage);
      y_stage = y + step * (T::a61 * k1 + T::a62 * k2 + T::a63 * k3 + T::a64 * k4 + T::a65 * k5);
      k6 = f(y_stage);
      y_new = y + step * (T::b1 * k1 + T::b3 * k3 + T::b4 * k4 + T::b5 * k5 + T::b6 * k6);
      k7 = f(y_new);
      st.rhs_evaluations += 6;

      const Matrix err = step * (T::e1 * k1 + T::e3 * k3 + T::e4 * k4 + T::e5 * k5 + T::e6 * k6 + T::e7 * k7);
      const double en = detail::error_norm(err, y, y_new, opt.abs_tol, opt.rel_tol);

      if (en <= 1.0) {
        t = last ? target : t + step;
        y.swap(y_new);
        k1.swap(k7);
        ++st.accepted;
        const double grow = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
        // A step clipped to an output time does not shrink the natural size.
        h = last ? std::max(h, step * grow) : step * grow;
      } else {
        ++st.rejected;
        h = step * (std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9) : 0.1);
        if (h < opt.min_step) {
          throw IntegrationError("integrate_dopri5: step size underflow at t = " + std::to_string(t), t);
        }
      }
    }
    if (!observer(t, static_cast<const Matrix&>(y))) return t;
  }
  return t;
}

}  // namespace qchain
