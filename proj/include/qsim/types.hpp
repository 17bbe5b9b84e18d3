#pragma once

#include <complex>
#include <cstdint>

namespace qsim {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace qsim
