#pragma once

// One global sign/normalization configuration. Nothing downstream may
// override these per test; the acceptance meta-check greps for that.

namespace dqrr::conv {

// x*xi - xi*x = kMoyalSign * t
inline constexpr int kMoyalSign = +1;

// U_0 reads the symplectic basis as (xi_1, x_1, ..., xi_d, x_d).
inline constexpr bool kFundamentalXiFirst = true;

// Brodzki prefactor 1/(n+1)! and target generator 1^(n+1) in degree 2n+1.
inline constexpr int kBrFactorialShift = 1;

} // namespace dqrr::conv
