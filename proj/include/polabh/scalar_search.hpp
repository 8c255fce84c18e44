// Copyright 2026 The polabh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef POLABH_SCALAR_SEARCH_HPP
#define POLABH_SCALAR_SEARCH_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace polabh::numeric {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
  int evaluations = 0;
};

// Golden-section search for the maximum of a unimodal f on [a, b]. Stops when
// the bracket is narrower than rel_tol * max(|x|, abs_floor).
template <class F>
ScalarOptimum golden_section_maximize(F&& f, double a, double b, double rel_tol = 1e-10,
                                      double abs_floor = 1e-300, int max_iter = 500) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  int evals = 2;
  for (int it = 0; it < max_iter; ++it) {
    const double scale = std::max({std::abs(c), std::abs(d), abs_floor});
    if (std::abs(b - a) <= rel_tol * scale) break;
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
    ++evals;
  }
  return fc > fd ? ScalarOptimum{c, fc, evals} : ScalarOptimum{d, fd, evals};
}

// Bisection for a root of f on [a, b]; f(a) and f(b) must differ in sign.
template <class F>
double bisect_root(F&& f, double a, double b, double rel_tol = 1e-12, int max_iter = 400) {
  double fa = f(a);
  if (fa == 0.0) return a;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    if (std::abs(b - a) <= rel_tol * std::max(std::abs(m), std::numeric_limits<double>::min()))
      return m;
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace polabh::numeric

#endif  // POLABH_SCALAR_SEARCH_HPP
