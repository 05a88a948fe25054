#ifndef NUSTABLE_NU_FAMILY_HPP
#define NUSTABLE_NU_FAMILY_HPP

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "nustable/error.hpp"

namespace nustable {

/// The five summation-index schemes.
enum class FamilyKind { deterministic, geometric, chebyshev, melamed, chebyshev_m };

inline std::string_view to_string(FamilyKind kind) {
  switch (kind) {
  case FamilyKind::deterministic: return "deterministic";
  case FamilyKind::geometric: return "geometric";
  case FamilyKind::chebyshev: return "chebyshev";
  case FamilyKind::melamed: return "melamed";
  case FamilyKind::chebyshev_m: return "chebyshev-m";
  }
  return "unknown";
}

inline std::optional<FamilyKind> parse_family_kind(std::string_view name) {
  if (name == "deterministic") return FamilyKind::deterministic;
  if (name == "geometric") return FamilyKind::geometric;
  if (name == "chebyshev") return FamilyKind::chebyshev;
  if (name == "melamed") return FamilyKind::melamed;
  if (name == "chebyshev-m" || name == "chebyshev_m") return FamilyKind::chebyshev_m;
  return std::nullopt;
}

/// A family {nu_p : p in Delta} of positive-integer random variables with
/// E[nu_p] = 1/p.
///
/// Admissible parameters:
///   deterministic       p = 1/n,   n >= 1
///   geometric, melamed  0 < p < 1
///   chebyshev, -m       p = 1/n^2, n >= 1
/// `m` only matters for melamed and chebyshev-m; m = 1 reduces them to
/// geometric and chebyshev respectively.
struct NuFamily {
  FamilyKind kind = FamilyKind::chebyshev;
  int m = 1;

  NuFamily() = default;
  explicit NuFamily(FamilyKind k, int m_ = 1) : kind(k), m(m_) {
    if (m < 1) throw DomainError("NuFamily: m must be >= 1");
  }

  static NuFamily deterministic() { return NuFamily(FamilyKind::deterministic); }
  static NuFamily geometric() { return NuFamily(FamilyKind::geometric); }
  static NuFamily chebyshev() { return NuFamily(FamilyKind::chebyshev); }
  static NuFamily melamed(int m) { return NuFamily(FamilyKind::melamed, m); }
  static NuFamily chebyshev_m(int m) { return NuFamily(FamilyKind::chebyshev_m, m); }

  bool lattice_parameter() const {
    return kind == FamilyKind::deterministic || kind == FamilyKind::chebyshev ||
           kind == FamilyKind::chebyshev_m;
  }

  /// Integer index n with p = 1/n (deterministic) or p = 1/n^2 (Chebyshev
  /// kinds), if p is such a lattice member.
  std::optional<int> index_of(double p) const {
    if (!lattice_parameter() || !(p > 0.0) || p > 1.0) return std::nullopt;
    const double raw = kind == FamilyKind::deterministic ? 1.0 / p : 1.0 / std::sqrt(p);
    const double n = std::round(raw);
    if (n < 1.0 || n > 1e6) return std::nullopt;
    const double back = kind == FamilyKind::deterministic ? 1.0 / n : 1.0 / (n * n);
    if (std::abs(back - p) > 1e-12 * p) return std::nullopt;
    return static_cast<int>(n);
  }

  bool admissible(double p) const {
    if (lattice_parameter()) return index_of(p).has_value();
    return p > 0.0 && p < 1.0;
  }

  /// Parameter for lattice index n: 1/n or 1/n^2.
  double parameter_for_index(int n) const {
    if (!lattice_parameter()) throw DomainError("parameter_for_index: family has no lattice Delta");
    if (n < 1) throw DomainError("parameter_for_index: n must be >= 1");
    const double nd = n;
    return kind == FamilyKind::deterministic ? 1.0 / nd : 1.0 / (nd * nd);
  }

  void require_admissible(double p) const {
    if (!admissible(p))
      throw DomainError("parameter " + std::to_string(p) + " is not admissible for family " +
                        std::string(to_string(kind)));
  }

  std::string name() const {
    std::string out(to_string(kind));
    if (kind == FamilyKind::melamed || kind == FamilyKind::chebyshev_m)
      out += "(m=" + std::to_string(m) + ")";
    return out;
  }

  bool operator==(const NuFamily&) const = default;
};

} // namespace nustable

#endif // NUSTABLE_NU_FAMILY_HPP
