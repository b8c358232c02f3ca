#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace emm::detail {

// 4pi-normalised associated Legendre functions Pbar_lm(cos theta) for
// 0 <= m <= l <= l_max, together with d/dtheta, at a single colatitude.
// No Condon-Shortley phase.
class LegendreRow {
 public:
  LegendreRow(int l_max, double x, double s) : l_max_(l_max), p_(size(l_max)), dp_(size(l_max)) {
    fill(x, s);
  }

  static std::size_t size(int l_max) { return static_cast<std::size_t>((l_max + 1) * (l_max + 2) / 2); }
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * (l + 1) / 2 + m); }

  double p(int l, int m) const { return p_[index(l, m)]; }
  double dp(int l, int m) const { return dp_[index(l, m)]; }

 private:
  void fill(double x, double s) {
    double pmm = 0.5 / std::sqrt(std::numbers::pi);
    for (int m = 0; m <= l_max_; ++m) {
      if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
      p_[index(m, m)] = pmm;
      if (m + 1 <= l_max_) p_[index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * x * pmm;
      for (int l = m + 2; l <= l_max_; ++l) {
        const double ll = static_cast<double>(l) * l;
        const double mm = static_cast<double>(m) * m;
        const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
        const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        p_[index(l, m)] = a * (x * p_[index(l - 1, m)] - b * p_[index(l - 2, m)]);
      }
    }
    // sin(t) dPbar_lm/dt = l x Pbar_lm - sqrt((2l+1)(l^2-m^2)/(2l-1)) Pbar_{l-1,m}
    for (int m = 0; m <= l_max_; ++m) {
      for (int l = m; l <= l_max_; ++l) {
        double v = l * x * p_[index(l, m)];
        if (l > m) {
          const double c = std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m) /
                                     (2.0 * l - 1.0));
          v -= c * p_[index(l - 1, m)];
        }
        dp_[index(l, m)] = v / s;
      }
    }
  }

  int l_max_;
  std::vector<double> p_, dp_;
};

}  // namespace emm::detail
