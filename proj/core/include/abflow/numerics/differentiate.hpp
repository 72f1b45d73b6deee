#pragma once

#include "abflow/types.hpp"

#include <functional>

namespace abflow::numerics {

/// First derivative from central differences at h and 2h combined by one
/// Richardson step (five-point stencil, O(h^4)).
double central_diff(const std::function<double(double)>& f, double x, double h);

/// Second derivative, same construction.
double central_diff_2nd(const std::function<double(double)>& f, double x, double h);

/// Gradient of a scalar planar field by central_diff along each axis.
Vec2 gradient(const std::function<double(const Vec2&)>& f, const Vec2& p, double h);

/// Laplacian of a scalar planar field by central_diff_2nd along each axis.
double laplacian(const std::function<double(const Vec2&)>& f, const Vec2& p, double h);

/// z-component of the curl of a planar vector field.
double curl_z(const std::function<Vec2(const Vec2&)>& field, const Vec2& p, double h);

/// In-plane components of curl(curl F) for a field F = F_z e_z, i.e. the
/// planar curl of the scalar F_z: (dF_z/dy, -dF_z/dx).
Vec2 curl_of_axial(const std::function<double(const Vec2&)>& fz, const Vec2& p, double h);

}  // namespace abflow::numerics
