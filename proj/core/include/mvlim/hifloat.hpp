#pragma once

#include "mvlim/evaluate.hpp"

#include <boost/multiprecision/mpfr.hpp>

namespace mvlim {

/// 600 significant decimal digits. The oracle evaluates along paths down to
/// t = 2^-30, where terms such as 1 - cos(x^2 y^2) sit several hundred
/// binary orders below the operands they cancel against.
using HiFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<600>,
                                              boost::multiprecision::et_off>;

template <>
struct ScalarTraits<HiFloat> {
  static HiFloat from_rational(const Rational& q) {
    HiFloat x;
    mpfr_set_q(x.backend().data(), q.get_mpq_t(), MPFR_RNDN);
    return x;
  }
};

}  // namespace mvlim
