#include "gl3/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "gl3/errors.hpp"
#include "gl3/parallel.hpp"
#include "gl3/summation.hpp"

namespace gl3 {

const GaussRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  if (auto it = cache.find(n); it != cache.end()) return it->second;

  GaussRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    long double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    long double dp = 0.0L;
    for (int iter = 0; iter < 100; ++iter) {
      long double p0 = 1.0L, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0L);
      const long double dz = p1 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-19L) break;
    }
    const double w = static_cast<double>(2.0L / ((1.0L - z * z) * dp * dp));
    rule.x[i] = -static_cast<double>(z);
    rule.x[n - 1 - i] = static_cast<double>(z);
    rule.w[i] = rule.w[n - 1 - i] = w;
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

QuadratureResult integrate(const std::function<cplx(double)>& f, double a, double b, const QuadratureOptions& opts) {
  QuadratureResult res;
  if (a == b) return res;
  const GaussRule& rule = gauss_legendre(33);
  const std::size_t m = rule.x.size();

  auto level = [&](std::size_t panels, std::vector<std::pair<double, cplx>>* samples) {
    const double width = (b - a) / static_cast<double>(panels);
    std::vector<cplx> values(panels * m);
    parallel_for(panels * m, [&](std::size_t idx) {
      const std::size_t p = idx / m, j = idx % m;
      const double left = a + width * static_cast<double>(p);
      values[idx] = f(left + 0.5 * width * (rule.x[j] + 1.0));
    });
    res.evaluations += values.size();
    CompensatedSum total;
    for (std::size_t p = 0; p < panels; ++p) {
      CompensatedSum panel;
      for (std::size_t j = 0; j < m; ++j) panel.add(rule.w[j] * values[p * m + j]);
      total.add(0.5 * width * panel.value());
    }
    if (samples) {
      samples->clear();
      for (std::size_t idx = 0; idx < values.size(); ++idx) {
        const std::size_t p = idx / m, j = idx % m;
        samples->emplace_back(a + width * static_cast<double>(p) + 0.5 * width * (rule.x[j] + 1.0), values[idx]);
      }
    }
    return total.value();
  };

  std::size_t panels = std::max<std::size_t>(opts.min_panels, 1);
  std::vector<std::pair<double, cplx>> samples;
  cplx prev = level(panels, opts.keep_samples ? &samples : nullptr);
  while (true) {
    if (panels * 2 > opts.max_panels)
      throw accuracy_error("integrate: no convergence with " + std::to_string(opts.max_panels) + " panels",
                           res.level_difference);
    panels *= 2;
    const cplx cur = level(panels, opts.keep_samples ? &samples : nullptr);
    res.level_difference = std::abs(cur - prev);
    prev = cur;
    if (res.level_difference <= opts.rel_tol * std::abs(cur) || res.level_difference <= opts.abs_tol) break;
  }
  res.value = prev;
  res.panels = panels;
  res.samples = std::move(samples);
  return res;
}

}  // namespace gl3
