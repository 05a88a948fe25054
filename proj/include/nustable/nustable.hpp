#ifndef NUSTABLE_NUSTABLE_HPP
#define NUSTABLE_NUSTABLE_HPP

#include "nustable/chebyshev.hpp"
#include "nustable/distributions.hpp"
#include "nustable/error.hpp"
#include "nustable/families.hpp"
#include "nustable/harness.hpp"
#include "nustable/laplace_inversion.hpp"
#include "nustable/nu_family.hpp"
#include "nustable/rng.hpp"
#include "nustable/series.hpp"
#include "nustable/statistics.hpp"
#include "nustable/tolerances.hpp"

#endif // NUSTABLE_NUSTABLE_HPP
