#ifndef NUSTABLE_TOLERANCES_HPP
#define NUSTABLE_TOLERANCES_HPP

#include <cmath>
#include <cstddef>

/// Every acceptance threshold used by the harness, the CLI and the tests.
///
/// Kolmogorov bands use the asymptotic 1% quantile of sup|B(t)|, K_0.99 =
/// 1.6276, rounded up to 1.63. Moment bands are 3 sigma of the sample mean.
namespace nustable::tol {

inline constexpr double kKolmogorov99 = 1.63;

/// One-sample KS band at the 1% level.
inline double ks_band(std::size_t n) { return kKolmogorov99 / std::sqrt(static_cast<double>(n)); }

/// Two-sample KS band: sqrt((n1 + n2) / (n1 n2)) scaling.
inline double ks_band_two_sample(std::size_t n1, std::size_t n2) {
  const double a = static_cast<double>(n1), b = static_cast<double>(n2);
  return kKolmogorov99 * std::sqrt((a + b) / (a * b));
}

/// Fixed KS threshold of the distributional acceptance criteria. It equals
/// ks_band(10^4), so it is looser than ks_band(N) for the 10^5 draws used.
inline constexpr double kAcceptanceKs = 0.0163;

inline constexpr double kSigmas = 3.0;

/// 3 sigma band for the mean of n draws with per-draw variance `variance`.
inline double mean_band(double variance, std::size_t n) {
  return kSigmas * std::sqrt(variance / static_cast<double>(n));
}

// Generating-function expansions.
inline constexpr double kPmfNegativeDust = 1e-14;  // clamp threshold for rounding noise
inline constexpr double kPmfMass = 1e-10;          // |sum + tail - 1|
inline constexpr double kTailBound = 1e-10;        // certified truncated mass
inline constexpr double kMeanRelative = 1e-8;      // mean vs 1/p
inline constexpr double kTailRateSlack = 1e-3;     // fitted decay vs cos(pi/(2n))
inline constexpr double kSeriesVsClosedForm = 1e-10;

// Deterministic identities.
inline constexpr double kFunctionalEquation = 1e-10;
inline constexpr double kCommutativity = 1e-12;
inline constexpr double kComposition = 1e-10;
inline constexpr double kReduction = 1e-12;        // m = 1 reductions
inline constexpr double kPhiSlope = 1e-6;          // phi'(0) = -1
inline constexpr double kPositiveDefinite = 1e-8;  // min eigenvalue floor

// Partial sums S(n, x) of the Chebyshev pmf.
inline constexpr double kPlateau = 0.01;
inline constexpr double kPartialSumLimit = 0.01;

// Monte Carlo cross-checks of A(x).
inline constexpr double kXiCdfVsMonteCarlo = 0.004;
inline constexpr double kXiMeanBand = 0.004;       // 3 sqrt(2/3 / 1e6) = 0.00245, rounded up
inline constexpr double kXiVarianceBand = 0.01;
inline constexpr double kXiVariance = 2.0 / 3.0;   // 5/3 - 1 from 1 - t + 5t^2/6

// Laplace inversion of exactly known pairs.
inline constexpr double kInversionKnownPair = 1e-6;
inline constexpr double kChiSquareInversion = 1e-5;

// Random-index limit theorem and characterization.
inline constexpr double kLlnFinalKs = 0.02;
inline constexpr double kWrongCandidateKs = 0.05;

} // namespace nustable::tol

#endif // NUSTABLE_TOLERANCES_HPP
