#ifndef NUSTABLE_ERROR_HPP
#define NUSTABLE_ERROR_HPP

#include <sstream>
#include <stdexcept>
#include <string>

namespace nustable {

/// Argument outside the documented domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Requested Chebyshev degree exceeds what exact 128-bit coefficients can hold.
class DegreeTooLarge : public std::out_of_range {
public:
  explicit DegreeTooLarge(int degree, int cap)
      : std::out_of_range("degree too large: " + std::to_string(degree) +
                          " exceeds cap " + std::to_string(cap)),
        degree_(degree) {}
  int degree() const noexcept { return degree_; }

private:
  int degree_;
};

/// A truncated expansion whose certified tail bound is above the requested limit.
class TailBoundTooLarge : public std::runtime_error {
public:
  TailBoundTooLarge(double bound, double limit)
      : std::runtime_error(message(bound, limit)),
        bound_(bound) {}
  double bound() const noexcept { return bound_; }

private:
  static std::string message(double bound, double limit) {
    std::ostringstream os;
    os << "tail bound too large: " << bound << " >= " << limit;
    return os.str();
  }

  double bound_;
};

} // namespace nustable

#endif // NUSTABLE_ERROR_HPP
