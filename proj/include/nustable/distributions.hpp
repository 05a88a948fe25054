#ifndef NUSTABLE_DISTRIBUTIONS_HPP
#define NUSTABLE_DISTRIBUTIONS_HPP

#include <algorithm>
#include <array>
#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/trigamma.hpp>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "nustable/error.hpp"
#include "nustable/families.hpp"
#include "nustable/laplace_inversion.hpp"
#include "nustable/rng.hpp"

namespace nustable {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// ---------------------------------------------------------------------------
// Hyperbolic secant law.
//
// One scale convention throughout: X_a = a X_1 has ch.f. 1/cosh(a t),
// density (1/(2a)) sech(pi x/(2a)) and cdf (2/pi) arctan(exp(pi x/(2a))).

struct SechDist {
  double a = 1.0;

  SechDist() = default;
  explicit SechDist(double scale) : a(scale) {
    if (!(a > 0.0)) throw DomainError("SechDist: scale must be positive");
  }
};

inline double sech_pdf(const SechDist& d, double x) {
  return 1.0 / (2.0 * d.a * std::cosh(std::numbers::pi * x / (2.0 * d.a)));
}

inline double sech_cdf(const SechDist& d, double x) {
  return 2.0 / std::numbers::pi * std::atan(std::exp(std::numbers::pi * x / (2.0 * d.a)));
}

inline double sech_quantile(const SechDist& d, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("sech_quantile: u must lie in (0, 1)");
  return d.a * 2.0 / std::numbers::pi * std::log(std::tan(std::numbers::pi * u / 2.0));
}

inline double sech_sample(const SechDist& d, RngStream& rng) { return sech_quantile(d, rng.uniform_open()); }

inline double sech_chf(const SechDist& d, double t) { return 1.0 / std::cosh(d.a * t); }

// ---------------------------------------------------------------------------
// Laplace law with ch.f. 1/(1 + a t^2), i.e. density exp(-|x|/b)/(2b), b = sqrt(a).

struct LaplaceDist {
  double a = 1.0;

  LaplaceDist() = default;
  explicit LaplaceDist(double scale) : a(scale) {
    if (!(a > 0.0)) throw DomainError("LaplaceDist: scale must be positive");
  }
  double b() const { return std::sqrt(a); }
};

inline double laplace_cdf(const LaplaceDist& d, double x) {
  const double z = x / d.b();
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

inline double laplace_sample(const LaplaceDist& d, RngStream& rng) {
  const double u = rng.uniform_open() - 0.5;
  const double mag = -std::log1p(-2.0 * std::abs(u));
  return (u < 0.0 ? -mag : mag) * d.b();
}

// ---------------------------------------------------------------------------
// The Wiener-functional laws xi_m.
//
// With lambda_k = 1/((k - 1/2)^2 pi^2), the Karhunen-Loeve expansion gives
//   xi_m = sum_k 2 m lambda_k G_k,   G_k ~ Gamma(1/m, 1) i.i.d.,
// whose Laplace transform is prod_k (1 + 2 m lambda_k t)^{-1/m}
// = (cosh sqrt(2 m t))^{-1/m} by the infinite product for cosh.
// m = 1 is int W_1^2 + int W_2^2 (G_k = chi^2_2 / 2); m = 2 is 2 int W^2.

inline constexpr int kMaxXiM = 8;
inline constexpr int kDefaultKlTerms = 200;

namespace detail {

/// A(x) and the density A'(x) from one Gaver-Stehfest pass: the transforms
/// are phi(t)/t and phi(t), sharing the phi evaluations.
inline std::pair<double, double> xi_cdf_and_pdf(const NuFamily& fam, double x, int order) {
  const auto& V = stehfest_weights<InversionReal>(order);
  const InversionReal a = boost::math::constants::ln_two<InversionReal>() / InversionReal(x);
  InversionReal cdf = 0, pdf = 0;
  for (int k = 1; k <= order; ++k) {
    const InversionReal t = a * k;
    const InversionReal f = phi_as<InversionReal>(fam, t);
    cdf += V[k - 1] * f / t;
    pdf += V[k - 1] * f;
  }
  return {static_cast<double>(a * cdf), static_cast<double>(a * pdf)};
}

/// Cubic Hermite table of A on a geometric grid, with exact slopes from the
/// inverted density. Built once per m.
struct XiCdfTable {
  double lo, hi;
  boost::math::interpolators::cubic_hermite<std::vector<double>> spline;
};

inline constexpr std::size_t kXiTablePoints = 1200;

inline XiCdfTable build_xi_cdf_table(int m) {
  const NuFamily fam = NuFamily::chebyshev_m(m);
  const double lo = 1e-3, hi = 40.0 * m;
  const double ratio = std::pow(hi / lo, 1.0 / static_cast<double>(kXiTablePoints - 1));
  std::vector<double> xs(kXiTablePoints), ys(kXiTablePoints), ds(kXiTablePoints);
  for (std::size_t i = 0; i < kXiTablePoints; ++i) {
    xs[i] = i + 1 == kXiTablePoints ? hi : lo * std::pow(ratio, static_cast<double>(i));
    std::tie(ys[i], ds[i]) = xi_cdf_and_pdf(fam, xs[i], kDefaultStehfestOrder);
  }
  return XiCdfTable{lo, hi, {std::move(xs), std::move(ys), std::move(ds)}};
}

inline const XiCdfTable& xi_cdf_table(int m) {
  static std::array<std::once_flag, kMaxXiM + 1> once;
  static std::array<std::unique_ptr<const XiCdfTable>, kMaxXiM + 1> tables;
  std::call_once(once[m], [m] { tables[m] = std::make_unique<const XiCdfTable>(build_xi_cdf_table(m)); });
  return *tables[m];
}

} // namespace detail

class XiDist {
public:
  explicit XiDist(int m = 1, int kl_terms = kDefaultKlTerms) : m_(m), kl_terms_(kl_terms) {
    if (m < 1 || m > kMaxXiM) throw DomainError("XiDist: m must lie in [1, 8]");
    if (kl_terms < 1) throw DomainError("XiDist: need at least one Karhunen-Loeve term");
    weights_.reserve(kl_terms);
    for (int k = 1; k <= kl_terms; ++k) {
      const double h = (k - 0.5) * std::numbers::pi;
      weights_.push_back(2.0 * m / (h * h));
    }
    // sum_{k>K} 2 lambda_k = (2/pi^2) psi'(K + 1/2); mean of the dropped terms.
    tail_mean_ = 2.0 / (std::numbers::pi * std::numbers::pi) * boost::math::trigamma(kl_terms + 0.5);
  }

  int m() const { return m_; }
  int kl_terms() const { return kl_terms_; }
  double tail_mean() const { return tail_mean_; }
  NuFamily family() const { return NuFamily::chebyshev_m(m_); }

  double laplace(double t) const { return phi(family(), t); }

  double sample(RngStream& rng) const {
    const double shape = 1.0 / m_;
    double acc = tail_mean_;
    for (double w : weights_) {
      double g;
      if (m_ == 1) g = standard_exponential(rng);
      else if (m_ == 2) {
        const double z = standard_normal(rng);
        g = 0.5 * z * z;
      } else g = gamma_variate(shape, rng);
      acc += w * g;
    }
    return acc;
  }

  /// A(x) by Gaver-Stehfest inversion of phi(t)/t, clamped to [0, 1].
  double cdf(double x, int order = kDefaultStehfestOrder) const {
    if (!(x > 0.0)) return 0.0;
    const NuFamily fam = family();
    const double v = gaver_stehfest([&](const InversionReal& t) { return phi_as<InversionReal>(fam, t) / t; },
                                    x, order);
    return std::clamp(v, 0.0, 1.0);
  }

  /// Density A'(x) by the same inversion.
  double pdf(double x, int order = kDefaultStehfestOrder) const {
    if (!(x > 0.0)) return 0.0;
    return std::max(0.0, detail::xi_cdf_and_pdf(family(), x, order).second);
  }

  /// A(x) from a cached interpolation table; agrees with cdf() to about
  /// 1e-9 and costs a table lookup. Falls back to cdf() off the table.
  double tabulated_cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    const auto& table = detail::xi_cdf_table(m_);
    if (x < table.lo || x > table.hi) return cdf(x);
    return std::clamp(table.spline(x), 0.0, 1.0);
  }

private:
  int m_;
  int kl_terms_;
  double tail_mean_;
  std::vector<double> weights_;
};

inline double xi_sample(const XiDist& d, RngStream& rng) { return d.sample(rng); }
inline double xi_cdf(const XiDist& d, double x) { return d.cdf(x); }

/// Exponential analogue for the geometric scheme: A_1(x) = 1 - exp(-x).
inline double geometric_analogue_cdf(double x) { return x > 0.0 ? -std::expm1(-x) : 0.0; }

/// (eta_1^2 + eta_2^2) / 2 for independent standard normals. The unscaled
/// chi-square sum has mean 2 and cdf 1 - exp(-x/2); halving it gives A_1.
inline double geometric_analogue_sample(RngStream& rng) {
  const double a = standard_normal(rng), b = standard_normal(rng);
  return 0.5 * (a * a + b * b);
}

// ---------------------------------------------------------------------------
// Symmetric strictly stable law with ch.f. exp(-c |t|^alpha).

inline double stable_sample(double alpha, double c, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable_sample: alpha outside (0, 2]");
  if (!(c > 0.0)) throw DomainError("stable_sample: scale must be positive");
  if (alpha == 2.0) return std::sqrt(2.0 * c) * standard_normal(rng);
  const double v = std::numbers::pi * (rng.uniform_open() - 0.5);
  if (alpha == 1.0) return c * std::tan(v);
  // Chambers-Mallows-Stuck, symmetric case.
  const double w = standard_exponential(rng);
  const double x = std::sin(alpha * v) / std::pow(std::cos(v), 1.0 / alpha) *
                   std::pow(std::cos((1.0 - alpha) * v) / w, (1.0 - alpha) / alpha);
  return std::pow(c, 1.0 / alpha) * x;
}

// ---------------------------------------------------------------------------
// Mixing laws A(x) with Laplace transform phi, one per family.

class MixingLaw {
public:
  explicit MixingLaw(const NuFamily& family, int kl_terms = kDefaultKlTerms)
      : family_(family),
        xi_(family.kind == FamilyKind::chebyshev_m ? family.m : 1, kl_terms) {
    if ((family.kind == FamilyKind::melamed || family.kind == FamilyKind::chebyshev_m) && family.m > kMaxXiM)
      throw DomainError("MixingLaw: m above the supported range");
  }

  const NuFamily& family() const { return family_; }

  double sample(RngStream& rng) const {
    switch (family_.kind) {
    case FamilyKind::deterministic: return 1.0;
    case FamilyKind::geometric: return standard_exponential(rng);
    case FamilyKind::melamed:
      if (family_.m == 1) return standard_exponential(rng);
      return family_.m * gamma_variate(1.0 / family_.m, rng);
    case FamilyKind::chebyshev:
    case FamilyKind::chebyshev_m: return xi_.sample(rng);
    }
    throw DomainError("MixingLaw: unsupported family");
  }

  double cdf(double x) const {
    if (!(x > 0.0)) return 0.0;
    switch (family_.kind) {
    case FamilyKind::deterministic: return x >= 1.0 ? 1.0 : 0.0;
    case FamilyKind::geometric: return geometric_analogue_cdf(x);
    case FamilyKind::melamed: return boost::math::gamma_p(1.0 / family_.m, x / family_.m);
    case FamilyKind::chebyshev:
    case FamilyKind::chebyshev_m: return xi_.tabulated_cdf(x);
    }
    throw DomainError("MixingLaw: unsupported family");
  }

  double laplace(double t) const { return phi(family_, t); }

private:
  NuFamily family_;
  XiDist xi_;
};

/// sqrt(2 a M) Z with M from the mixing law: ch.f. E exp(-a t^2 M) = phi(a t^2).
inline double nu_normal_sample(const MixingLaw& mixing, double a, RngStream& rng) {
  if (!(a > 0.0)) throw DomainError("nu_normal_sample: scale must be positive");
  const double M = mixing.sample(rng);
  return std::sqrt(2.0 * a * M) * standard_normal(rng);
}

inline double nu_normal_sample(const NuFamily& family, double a, RngStream& rng) {
  return nu_normal_sample(MixingLaw(family), a, rng);
}

/// M^{1/alpha} S with S symmetric stable of scale c: ch.f. phi(c |t|^alpha).
/// Draws M before S, so alpha = 2 consumes the stream exactly like
/// nu_normal_sample with a = c.
inline double nu_stable_sample(const MixingLaw& mixing, double alpha, double c, RngStream& rng) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("nu_stable_sample: alpha outside (0, 2]");
  const double M = mixing.sample(rng);
  return std::pow(M, 1.0 / alpha) * stable_sample(alpha, c, rng);
}

inline double nu_stable_sample(const NuFamily& family, double alpha, double c, RngStream& rng) {
  return nu_stable_sample(MixingLaw(family), alpha, c, rng);
}

} // namespace nustable

#endif // NUSTABLE_DISTRIBUTIONS_HPP
