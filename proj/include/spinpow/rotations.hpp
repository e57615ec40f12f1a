#ifndef SPINPOW_ROTATIONS_HPP
#define SPINPOW_ROTATIONS_HPP

#include <Eigen/Dense>
#include <utility>

namespace spinpow {

/// Active zyz Euler angles: R = Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

Eigen::Matrix3d rotation_matrix(const EulerAngles& e);

/// Inverse of rotation_matrix; beta is returned in [0, pi].
EulerAngles euler_from_matrix(const Eigen::Matrix3d& r);

EulerAngles euler_from_axis_angle(const Eigen::Vector3d& axis, double angle);

/// Unit vector with spherical angles (theta, phi).
Eigen::Vector3d direction(double theta, double phi);

/// (theta, phi) of a direction; phi in (-pi, pi].
std::pair<double, double> direction_angles(const Eigen::Vector3d& n);

}  // namespace spinpow

#endif
