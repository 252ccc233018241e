#pragma once

#include "hyerslab/linmap.hpp"

namespace hyerslab {

// Defining-identity defects, evaluated at concrete arguments. Each returns
// the codomain norm of the left-hand side minus right-hand side.

/// || delta(a^2) - a.delta(a) - delta(a).a ||
double jordan_defect(const LinearMap& delta, const Algebra& a_alg, const Bimodule& x,
                     const CVector& a);

/// || d(a^2) - a.d(a) - delta(a).a ||
double gjd_defect(const LinearMap& d, const LinearMap& delta, const Algebra& a_alg,
                  const Bimodule& x, const CVector& a);

/// || delta(ab) - a.delta(b) - delta(a).b ||
double derivation_defect(const LinearMap& delta, const Algebra& a_alg, const Bimodule& x,
                         const CVector& a, const CVector& b);

/// || d(ab) - a.d(b) - delta(a).b ||
double generalized_derivation_defect(const LinearMap& d, const LinearMap& delta,
                                     const Algebra& a_alg, const Bimodule& x, const CVector& a,
                                     const CVector& b);

}  // namespace hyerslab
