#include "ipm/weight_params.hpp"

#include <cmath>

#include "ipm/errors.hpp"

namespace ipm {

WeightParams WeightParams::linked(double L, double l1, double B) {
  WeightParams wp;
  wp.L = L;
  wp.l1 = l1;
  wp.l2 = L - l1 * l1;
  wp.K = std::pow(l1, -4.0);
  wp.B = B;
  wp.validate();
  return wp;
}

void WeightParams::validate() const {
  if (!(l1 > 0.0 && l1 < l2 && l2 < L)) throw DomainError("weights need 0 < l1 < l2 < L");
  if (!(l1 < 1.0)) throw DomainError("weights need l1 < 1");
  if (!(L - l2 < 1.0)) throw DomainError("weights need L - l2 < 1");
  if (!(K > 10.0)) throw DomainError("weights need K > 10");
  if (!(B > 0.0)) throw DomainError("weights need B > 0");
}

}  // namespace ipm
