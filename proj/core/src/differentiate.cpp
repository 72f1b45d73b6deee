#include "abflow/numerics/differentiate.hpp"

namespace abflow::numerics {

double central_diff(const std::function<double(double)>& f, double x, double h) {
  const double d1 = f(x + h) - f(x - h);
  const double d2 = f(x + 2.0 * h) - f(x - 2.0 * h);
  return (8.0 * d1 - d2) / (12.0 * h);
}

double central_diff_2nd(const std::function<double(double)>& f, double x, double h) {
  const double f0 = f(x);
  const double s1 = f(x + h) + f(x - h);
  const double s2 = f(x + 2.0 * h) + f(x - 2.0 * h);
  return (16.0 * s1 - s2 - 30.0 * f0) / (12.0 * h * h);
}

Vec2 gradient(const std::function<double(const Vec2&)>& f, const Vec2& p, double h) {
  const double gx = central_diff([&](double x) { return f({x, p.y}); }, p.x, h);
  const double gy = central_diff([&](double y) { return f({p.x, y}); }, p.y, h);
  return {gx, gy};
}

double laplacian(const std::function<double(const Vec2&)>& f, const Vec2& p, double h) {
  return central_diff_2nd([&](double x) { return f({x, p.y}); }, p.x, h) +
         central_diff_2nd([&](double y) { return f({p.x, y}); }, p.y, h);
}

double curl_z(const std::function<Vec2(const Vec2&)>& field, const Vec2& p, double h) {
  const double dfy_dx = central_diff([&](double x) { return field({x, p.y}).y; }, p.x, h);
  const double dfx_dy = central_diff([&](double y) { return field({p.x, y}).x; }, p.y, h);
  return dfy_dx - dfx_dy;
}

Vec2 curl_of_axial(const std::function<double(const Vec2&)>& fz, const Vec2& p, double h) {
  const Vec2 g = gradient(fz, p, h);
  return {g.y, -g.x};
}

}  // namespace abflow::numerics
