#pragma once

namespace switchsim {

// Exponential integral E1(x) = int_x^inf exp(-t)/t dt, x > 0.
//
// Power series about 0 for x < 1, modified-Lentz continued fraction for
// x >= 1. Relative error below 1e-12 over the tested range [1e-8, 700];
// the storage model only needs [1e-7, ~10].
//
// Throws std::domain_error for x <= 0 (E1 diverges at 0 and is complex
// for negative arguments).
double expint_e1(double x);

} // namespace switchsim
