#include "spinpow/rotations.hpp"

#include <cmath>

namespace spinpow {

namespace {

Eigen::Matrix3d rot_z(double a) {
    Eigen::Matrix3d r;
    r << std::cos(a), -std::sin(a), 0, std::sin(a), std::cos(a), 0, 0, 0, 1;
    return r;
}

Eigen::Matrix3d rot_y(double b) {
    Eigen::Matrix3d r;
    r << std::cos(b), 0, std::sin(b), 0, 1, 0, -std::sin(b), 0, std::cos(b);
    return r;
}

}  // namespace

Eigen::Matrix3d rotation_matrix(const EulerAngles& e) {
    return rot_z(e.alpha) * rot_y(e.beta) * rot_z(e.gamma);
}

EulerAngles euler_from_matrix(const Eigen::Matrix3d& r) {
    EulerAngles e;
    // r(2,2) = cos(beta)
    e.beta = std::acos(std::clamp(r(2, 2), -1.0, 1.0));
    if (std::abs(r(2, 2)) < 1.0 - 1e-12) {
        e.alpha = std::atan2(r(1, 2), r(0, 2));
        e.gamma = std::atan2(r(2, 1), -r(2, 0));
    } else if (r(2, 2) > 0) {
        // beta = 0: only alpha+gamma is defined
        e.alpha = std::atan2(r(1, 0), r(0, 0));
        e.gamma = 0.0;
    } else {
        // beta = pi: only alpha-gamma is defined; R = Rz(alpha-gamma) Ry(pi)
        e.alpha = std::atan2(-r(1, 0), -r(0, 0));
        e.gamma = 0.0;
    }
    return e;
}

EulerAngles euler_from_axis_angle(const Eigen::Vector3d& axis, double angle) {
    const Eigen::Vector3d n = axis.normalized();
    const Eigen::Matrix3d r = Eigen::AngleAxisd(angle, n).toRotationMatrix();
    return euler_from_matrix(r);
}

Eigen::Vector3d direction(double theta, double phi) {
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

std::pair<double, double> direction_angles(const Eigen::Vector3d& n) {
    const Eigen::Vector3d u = n.normalized();
    const double theta = std::acos(std::clamp(u.z(), -1.0, 1.0));
    const double phi = std::atan2(u.y(), u.x());
    return {theta, phi};
}

}  // namespace spinpow
