#include "lclt/numeric.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lclt {

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, unsigned max_depth) {
  if (a == b) return {};
  QuadratureResult out;
  out.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      f, a, b, max_depth, rel_tol, &out.error_estimate);
  return out;
}

QuadratureResult integrate_absolute(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                    unsigned max_depth) {
  if (a == b) return {};
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  // one unrefined pass estimates the L1 norm that scales the tolerance
  double l1 = 0.0;
  QuadratureResult out;
  out.value = GK::integrate(f, a, b, 0, 1.0, &out.error_estimate, &l1);
  if (out.error_estimate <= abs_tol || l1 == 0.0) return out;
  out.value = GK::integrate(f, a, b, max_depth, abs_tol / l1, &out.error_estimate);
  return out;
}

}  // namespace lclt
