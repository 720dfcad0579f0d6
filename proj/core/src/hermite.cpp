#include "gaussmatch/hermite.hpp"

#include <algorithm>
#include <cmath>

#include "gaussmatch/quadrature.hpp"
#include "gaussmatch/special.hpp"

namespace gaussmatch {
namespace {

double factorial(int k) { return std::exp(std::lgamma(k + 1.0)); }

constexpr double kSpan = 40.0;

// Sign changes of f on a fine grid, refined by bisection.
std::vector<double> real_roots(const HermiteExpansion& f) {
  std::vector<double> roots;
  const int deg = f.degree();
  if (deg < 1) return roots;
  const double limit = 2.0 * std::sqrt(static_cast<double>(deg)) + 8.0;
  const int steps = 400 * (deg + 1);
  double x0 = -limit, f0 = f(x0);
  for (int i = 1; i <= steps; ++i) {
    const double x1 = -limit + 2.0 * limit * i / steps;
    const double f1 = f(x1);
    if (f0 == 0.0) roots.push_back(x0);
    if (f0 * f1 < 0.0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace

double hermite(int k, double x) {
  require(k >= 0, "hermite: k >= 0");
  if (k == 0) return 1.0;
  double prev = 1.0, cur = x;
  for (int j = 1; j < k; ++j) {
    const double next = x * cur - j * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

HermiteExpansion::HermiteExpansion(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  require(all_finite(coeffs_), "HermiteExpansion: non-finite coefficient");
}

HermiteExpansion HermiteExpansion::basis(int k, double scale) {
  require(k >= 0, "HermiteExpansion::basis: k >= 0");
  std::vector<double> c(k + 1, 0.0);
  c[k] = scale;
  return HermiteExpansion(std::move(c));
}

double HermiteExpansion::operator()(double x) const {
  // Clenshaw for He_{k+1} = x He_k - k He_{k-1}
  double b1 = 0.0, b2 = 0.0;
  for (int k = degree(); k >= 1; --k) {
    const double b0 = coeffs_[k] + x * b1 - (k + 1) * b2;
    b2 = b1;
    b1 = b0;
  }
  if (coeffs_.empty()) return 0.0;
  return coeffs_[0] + x * b1 - b2;
}

HermiteExpansion HermiteExpansion::derivative() const {
  if (coeffs_.size() <= 1) return HermiteExpansion(std::vector<double>{0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = static_cast<double>(k) * coeffs_[k];
  return HermiteExpansion(std::move(d));
}

double HermiteExpansion::l2_norm_sq() const { return hermite_inner(*this, *this); }

HermiteExpansion& HermiteExpansion::operator+=(const HermiteExpansion& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), 0.0);
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  return *this;
}

double hermite_inner(const HermiteExpansion& f, const HermiteExpansion& g) {
  const int K = std::min(f.degree(), g.degree());
  double s = 0.0;
  for (int k = 0; k <= K; ++k) s += f.coeff(k) * g.coeff(k) * factorial(k);
  return s;
}

HermiteExpansion semigroup_apply(const HermiteExpansion& f, double t) {
  require(t >= 0.0, "semigroup_apply: t >= 0");
  std::vector<double> c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(-static_cast<double>(k) * t);
  return HermiteExpansion(std::move(c));
}

double semigroup_apply_quadrature(const HermiteExpansion& f, double t, double x, int nodes) {
  require(t >= 0.0, "semigroup_apply_quadrature: t >= 0");
  const double a = std::exp(-t);
  const double s = std::sqrt(-std::expm1(-2.0 * t));
  return gauss_hermite_integrate([&](double z) { return f(a * x + s * z); }, nodes);
}

HermiteExpansion spectral_apply(const HermiteExpansion& f, double exponent) {
  if (exponent < 0.0 && !f.mean_zero())
    throw InvalidArgument("spectral_apply: negative powers need a mean-zero expansion");
  std::vector<double> c = f.coeffs();
  for (std::size_t k = 1; k < c.size(); ++k) c[k] *= std::pow(static_cast<double>(k), exponent);
  if (!c.empty() && exponent != 0.0) c[0] = 0.0;
  return HermiteExpansion(std::move(c));
}

double riesz_energy(const HermiteExpansion& f) {
  double s = 0.0;
  for (int k = 1; k <= f.degree(); ++k) s += k * f.coeff(k) * f.coeff(k) * factorial(k);
  return s;
}

double lp_norm_pow(const HermiteExpansion& f, double p, const QuadSettings& quad) {
  require(p >= 1.0, "lp_norm_pow: p >= 1");
  const int deg = std::max(f.degree(), 0);
  const bool even_integer = p == std::floor(p) && static_cast<long>(p) % 2 == 0;
  if (even_integer) {
    const int needed = static_cast<int>(deg * p / 2.0) + 1;
    const int nodes = std::min(400, std::max(quad.nodes, needed));
    return gauss_hermite_integrate([&](double x) { return std::pow(f(x), p); }, nodes);
  }
  auto g = [&](double x) { return normal_pdf(x) * std::pow(std::abs(f(x)), p); };
  std::vector<double> breaks = real_roots(f);
  breaks.push_back(0.0);
  return integrate_checked(g, -kSpan, kSpan, quad, "lp_norm_pow", breaks);
}

double gradient_lp_norm_pow(const HermiteExpansion& f, double p, const QuadSettings& quad) {
  return lp_norm_pow(f.derivative(), p, quad);
}

double lp_norm(const HermiteExpansion& f, double p, const QuadSettings& quad) {
  return std::pow(lp_norm_pow(f, p, quad), 1.0 / p);
}

double gradient_lp_norm(const HermiteExpansion& f, double p, const QuadSettings& quad) {
  return std::pow(gradient_lp_norm_pow(f, p, quad), 1.0 / p);
}

}  // namespace gaussmatch
