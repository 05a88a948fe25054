#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <numbers>

#include "nustable/families.hpp"
#include "nustable/series.hpp"

namespace {

using nustable::expand_pgf;
using nustable::NuFamily;
using nustable::Pmf;
using nustable::TruncatedSeries;

void expect_coeffs_near(const TruncatedSeries& s, const std::vector<double>& want, double tol) {
  ASSERT_GE(s.coeffs.size(), want.size());
  for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(s.coeffs[k], want[k], tol) << "k=" << k;
}

// Oracle for the Chebyshev pmf: 100-digit reciprocal of the reversed
// polynomial Q(z) = z^n T_n(1/z) with exact integer coefficients. This is the
// cancellation-prone route, made safe by the extra precision.
std::vector<double> chebyshev_pmf_oracle(int n, std::size_t K) {
  using Big = boost::multiprecision::cpp_bin_float_100;
  const auto T = nustable::cheb_coeffs(n);
  std::vector<Big> Q(n + 1);
  for (int i = 0; i <= n; ++i) Q[i] = Big(nustable::to_string(T.coeffs[n - i]));
  std::vector<Big> t(K + 1, Big(0));
  t[0] = 1 / Q[0];
  for (std::size_t k = 1; k <= K; ++k) {
    Big acc = 0;
    for (std::size_t j = 1; j <= std::min<std::size_t>(k, n); ++j) acc += Q[j] * t[k - j];
    t[k] = -acc / Q[0];
  }
  std::vector<double> p(K + 1, 0.0);
  for (std::size_t k = n; k <= K; ++k) p[k] = static_cast<double>(t[k - n]);
  return p;
}

TEST(SeriesReciprocal, Examples) {
  expect_coeffs_near(nustable::series_reciprocal(TruncatedSeries({1, -1, 0, 0, 0})), {1, 1, 1, 1, 1}, 0.0);
  expect_coeffs_near(nustable::series_reciprocal(TruncatedSeries({2, 0, -1, 0, 0, 0, 0})),
                     {0.5, 0, 0.25, 0, 0.125, 0, 0.0625}, 1e-16);
  const TruncatedSeries s({1.5, -0.3, 0.7, 2.0, -1.1, 0.25});
  const auto back = nustable::series_reciprocal(nustable::series_reciprocal(s));
  expect_coeffs_near(back, s.coeffs, 1e-12);
  EXPECT_THROW(nustable::series_reciprocal(TruncatedSeries({0, 1})), nustable::DomainError);
}

TEST(SeriesCompose, Examples) {
  const auto sq = TruncatedSeries::polynomial({0, 0, 1, 0});
  const TruncatedSeries inner({0, 1, 1, 0});
  expect_coeffs_near(nustable::series_compose(sq, inner), {0, 0, 1, 2}, 0.0);
  const TruncatedSeries identity({0, 1, 0, 0});
  const TruncatedSeries g({0, 0.3, -0.2, 0.9});
  expect_coeffs_near(nustable::series_compose(identity, g), g.coeffs, 0.0);
}

TEST(SeriesCompose, PreconditionEnforced) {
  const TruncatedSeries truncated_outer({1, 1, 1});
  const TruncatedSeries shifted_inner({0.5, 1, 0});
  EXPECT_THROW(nustable::series_compose(truncated_outer, shifted_inner), nustable::DomainError);
  // Exact polynomial outer accepts a nonzero inner constant: (1 + w)^2 at w = 1 + z.
  const auto outer = TruncatedSeries::polynomial({1, 2, 1});
  expect_coeffs_near(nustable::series_compose(outer, TruncatedSeries({1, 1, 0, 0})), {4, 4, 1, 0}, 1e-15);
}

TEST(SeriesCompose, ChebyshevCommutesAndMatchesProductDegree) {
  const auto fam = NuFamily::chebyshev();
  const auto a = expand_pgf(fam, 1.0 / 4, 200).to_series(200);
  const auto b = expand_pgf(fam, 1.0 / 9, 200).to_series(200);
  const auto ab = nustable::series_compose(a, b);
  const auto ba = nustable::series_compose(b, a);
  // T_2 o T_3 = T_6, so both orders equal P_{1/36}.
  const auto c = expand_pgf(fam, 1.0 / 36, 4000).to_series(200);
  for (std::size_t k = 0; k <= 200; ++k) {
    EXPECT_NEAR(ab.coeffs[k], ba.coeffs[k], 1e-12) << k;
    EXPECT_NEAR(ab.coeffs[k], c.coeffs[k], 1e-12) << k;
  }
}

TEST(SeriesFractionalPower, Examples) {
  expect_coeffs_near(nustable::series_fractional_power(TruncatedSeries({1, -1, 0, 0}), -1.0), {1, 1, 1, 1}, 1e-15);
  expect_coeffs_near(nustable::series_fractional_power(TruncatedSeries({1, -1, 0}), -0.5), {1, 0.5, 0.375}, 1e-15);
  const TruncatedSeries s({2.0, 0.5, -0.25, 1.0});
  expect_coeffs_near(nustable::series_fractional_power(s, 1.0), s.coeffs, 1e-15);
  // Integer exponent of an exact polynomial stays exact: (1 + z)^3.
  const auto cube = nustable::series_fractional_power(TruncatedSeries::polynomial({1, 1, 0, 0}), 3.0);
  expect_coeffs_near(cube, {1, 3, 3, 1}, 1e-14);
  EXPECT_TRUE(cube.exact_polynomial());
  EXPECT_THROW(nustable::series_fractional_power(TruncatedSeries({0.0, 1.0}), 0.5), nustable::DomainError);
  EXPECT_THROW(nustable::series_fractional_power(TruncatedSeries({-1.0, 1.0}), 0.5), nustable::DomainError);
}

TEST(ExpandPgf, ChebyshevN2ClosedForm) {
  const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 0.25, 80);
  // z^2 / (2 - z^2) = sum_{i>=1} 2^{-i} z^{2i}
  for (std::size_t k = 0; k <= 80; ++k) {
    const double want = (k >= 2 && k % 2 == 0) ? std::ldexp(1.0, -static_cast<int>(k / 2)) : 0.0;
    EXPECT_DOUBLE_EQ(pmf(k), want) << k;
  }
}

TEST(ExpandPgf, ChebyshevN3ClosedForm) {
  // 1/T_3(1/z) = z^3 / (4 - 3 z^2) = sum_i (1/4)(3/4)^i z^{3+2i}
  const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 1.0 / 9);
  for (std::size_t i = 0; i < 60; ++i) {
    EXPECT_NEAR(pmf(3 + 2 * i), 0.25 * std::pow(0.75, static_cast<double>(i)), 1e-16);
    EXPECT_EQ(pmf(4 + 2 * i), 0.0);
  }
}

TEST(ExpandPgf, ChebyshevMatchesHighPrecisionReciprocal) {
  for (int n : {2, 3, 4, 5, 7, 10, 16, 25, 32}) {
    const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 1.0 / (n * n));
    const std::size_t K = std::min<std::size_t>(pmf.order(), 600);
    const auto oracle = chebyshev_pmf_oracle(n, K);
    for (std::size_t k = 0; k <= K; ++k) EXPECT_NEAR(pmf(k), oracle[k], 1e-15) << "n=" << n << " k=" << k;
  }
}

TEST(ExpandPgf, DoublePrecisionReciprocalAgreesForSmallDegree) {
  // The plain reciprocal route is fine for small n; the product route must agree.
  for (int n : {2, 3, 4, 6}) {
    const auto T = nustable::cheb_coeffs(n).as_doubles();
    std::vector<double> Q(301, 0.0);
    for (int i = 0; i <= n; ++i) Q[i] = T[n - i];
    const auto inv = nustable::series_reciprocal(TruncatedSeries::polynomial(Q));
    const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 1.0 / (n * n), 1000);
    for (std::size_t k = n; k <= 300; ++k) EXPECT_NEAR(pmf(k), inv.coeffs[k - n], 1e-15);
  }
}

TEST(ExpandPgf, GeometricAndDeterministic) {
  const Pmf g = expand_pgf(NuFamily::geometric(), 0.3, 100);
  for (std::size_t k = 1; k <= 100; ++k) EXPECT_NEAR(g(k), 0.3 * std::pow(0.7, static_cast<double>(k - 1)), 1e-16);
  EXPECT_EQ(g(0), 0.0);

  const Pmf d = expand_pgf(NuFamily::deterministic(), 1.0 / 5);
  EXPECT_EQ(d(5), 1.0);
  EXPECT_EQ(d(4), 0.0);
  EXPECT_EQ(d(6), 0.0);
  EXPECT_EQ(d.tail_mass, 0.0);
}

TEST(ExpandPgf, MelamedMatchesFractionalPower) {
  for (int m : {2, 3, 5}) {
    const double p = 0.35;
    const std::size_t K = 150;
    const Pmf pmf = expand_pgf(NuFamily::melamed(m), p, 400);
    std::vector<double> base(K + 1, 0.0);
    base[0] = 1.0;
    base[m] = -(1.0 - p);
    const auto pw = nustable::series_fractional_power(TruncatedSeries::polynomial(base), -1.0 / m);
    const double lead = std::pow(p, 1.0 / m);
    for (std::size_t k = 1; k <= K; ++k) EXPECT_NEAR(pmf(k), lead * pw.coeffs[k - 1], 1e-15) << "m=" << m << " k=" << k;
  }
}

TEST(ExpandPgf, MelamedOneIsGeometric) {
  const Pmf a = expand_pgf(NuFamily::melamed(1), 0.4);
  const Pmf b = expand_pgf(NuFamily::geometric(), 0.4);
  ASSERT_EQ(a.probs.size(), b.probs.size());
  for (std::size_t i = 0; i < a.probs.size(); ++i) EXPECT_DOUBLE_EQ(a.probs[i], b.probs[i]);
}

TEST(ExpandPgf, ChebyshevMMatchesFractionalPower) {
  // Second route: [1/T_n(1/w)]^{1/m} at w = z^m, via the log-derivative recurrence.
  for (int m : {2, 3}) {
    for (int n : {2, 3, 4}) {
      const std::size_t W = 120;  // U(w) = P(w) / w^n, truncated
      const Pmf pmf = expand_pgf(NuFamily::chebyshev_m(m), 1.0 / (n * n), 4000);
      const Pmf base = expand_pgf(NuFamily::chebyshev(), 1.0 / (n * n), 4000);
      std::vector<double> U(W * m + 1, 0.0);
      for (std::size_t i = 0; i <= W; ++i) U[i * m] = base(n + i);
      const auto root = nustable::series_fractional_power(TruncatedSeries(U), 1.0 / m);
      for (std::size_t k = 0; k <= W * m; ++k)
        EXPECT_NEAR(pmf(n + k), root.coeffs[k], 1e-14) << "m=" << m << " n=" << n << " k=" << k;
    }
  }
}

TEST(ExpandPgf, InvariantsAllFamilies) {
  struct Case {
    NuFamily fam;
    double p;
  };
  std::vector<Case> cases{{NuFamily::deterministic(), 1.0 / 3}, {NuFamily::geometric(), 0.05},
                          {NuFamily::geometric(), 0.9},         {NuFamily::melamed(2), 0.2},
                          {NuFamily::melamed(3), 0.6},          {NuFamily::chebyshev_m(2), 1.0 / 9},
                          {NuFamily::chebyshev_m(3), 1.0 / 25}, {NuFamily::chebyshev_m(2), 1.0 / 100}};
  for (int n = 1; n <= 32; ++n) cases.push_back({NuFamily::chebyshev(), 1.0 / (n * n)});
  for (const auto& c : cases) {
    const Pmf pmf = expand_pgf(c.fam, c.p);
    const auto chk = nustable::check_pmf(pmf);
    EXPECT_TRUE(chk.nonnegative) << c.fam.name() << " p=" << c.p;
    EXPECT_TRUE(chk.normalized) << c.fam.name() << " p=" << c.p << " mass=" << chk.mass_with_bound;
    EXPECT_TRUE(chk.mean_ok) << c.fam.name() << " p=" << c.p << " rel=" << chk.mean_relative_error;
    EXPECT_LE(pmf.tail_mass, *pmf.tail_bound + 1e-14);
    EXPECT_NEAR(*pmf.mean_exact, 1.0 / c.p, 1e-9 / c.p);
  }
}

TEST(ExpandPgf, ChebyshevTailDecayRate) {
  for (int n = 2; n <= 32; ++n) {
    const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 1.0 / (n * n));
    const double r = std::cos(std::numbers::pi / (2.0 * n));
    EXPECT_LE(nustable::fitted_tail_rate(pmf), r + nustable::tol::kTailRateSlack) << n;
  }
}

TEST(ExpandPgf, ErrorPaths) {
  EXPECT_THROW(expand_pgf(NuFamily::chebyshev(), 0.3), nustable::DomainError);
  EXPECT_THROW(expand_pgf(NuFamily::geometric(), 1.0), nustable::DomainError);
  EXPECT_THROW(expand_pgf(NuFamily::deterministic(), 0.3), nustable::DomainError);
  try {
    expand_pgf(NuFamily::chebyshev(), 1.0 / 25, 30);
    FAIL() << "expected TailBoundTooLarge";
  } catch (const nustable::TailBoundTooLarge& e) {
    const double r = std::cos(std::numbers::pi / 10);
    EXPECT_NEAR(e.bound(), std::pow(r, 30) / (1 - r), 1e-12);
  }
}

TEST(ReversalValidity, ChebyshevT2) {
  const std::vector<double> T2{-1, 0, 2};
  const auto rep = nustable::validate_lemma1(T2, 2, 40);
  EXPECT_TRUE(rep.valid()) << (rep.failures.empty() ? "" : rep.failures.front());
  const Pmf pmf = expand_pgf(NuFamily::chebyshev(), 0.25, 80);
  for (std::size_t k = 0; k <= 40; ++k) EXPECT_NEAR(rep.expansion.coeffs[k], pmf(k), 1e-16);
}

TEST(ReversalValidity, MonomialIsUnitMass) {
  const std::vector<double> x2{0, 0, 1};
  const auto rep = nustable::validate_lemma1(x2, 2, 10);
  EXPECT_TRUE(rep.valid());
  for (std::size_t k = 0; k <= 10; ++k) EXPECT_EQ(rep.expansion.coeffs[k], k == 2 ? 1.0 : 0.0);
  EXPECT_DOUBLE_EQ(rep.sum, 1.0);
}

TEST(ReversalValidity, ZeroOutsideIntervalIsFlagged) {
  // (x^2 - 2.25)^2 / 1.5625: even, positive leading, P(1) = 1, zeros at +-1.5.
  const double s = 1.0 / 1.5625;
  const std::vector<double> P{2.25 * 2.25 * s, 0, -4.5 * s, 0, s};
  const auto rep = nustable::validate_lemma1(P, 4, 30);
  EXPECT_TRUE(rep.even_powers);
  EXPECT_TRUE(rep.unit_at_one);
  EXPECT_TRUE(rep.positive_leading);
  EXPECT_FALSE(rep.zeros_inside);
  EXPECT_FALSE(rep.valid());
  EXPECT_FALSE(rep.failures.empty());
}

TEST(ReversalValidity, OtherHypothesisFailures) {
  const std::vector<double> odd{0, 0.5, 0, 0.5};
  EXPECT_FALSE(nustable::validate_lemma1(odd, 3, 10).even_powers);
  const std::vector<double> not_unit{-1, 0, 3};
  EXPECT_FALSE(nustable::validate_lemma1(not_unit, 2, 10).unit_at_one);
  // Zero at 1.5 with a negative leading coefficient: (x^2 - 2.25)/(-1.25).
  const std::vector<double> neg{1.8, 0, -0.8};
  const auto rep = nustable::validate_lemma1(neg, 2, 10);
  EXPECT_FALSE(rep.positive_leading);
  EXPECT_FALSE(rep.zeros_inside);
}

TEST(ReversalValidity, AllChebyshevEvenDegrees) {
  for (int n = 2; n <= 32; n += 2) {
    const auto rep = nustable::validate_lemma1(nustable::cheb_coeffs(n).as_doubles(), n, 4 * n);
    EXPECT_TRUE(rep.hypotheses_hold()) << n;
  }
}

} // namespace
