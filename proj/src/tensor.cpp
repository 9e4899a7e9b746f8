#include "hyperdiff/tensor.hpp"

#include <cmath>
#include <sstream>

#include "hyperdiff/errors.hpp"

namespace hyperdiff {

DiffusionTensor DiffusionTensor::from_components(double k_x, double k_y, double k_c) {
    if (!std::isfinite(k_x) || !std::isfinite(k_y) || !std::isfinite(k_c)) {
        throw InvalidArgument("diffusion tensor components must be finite");
    }
    if (k_x <= 0.0 || k_y <= 0.0) {
        std::ostringstream msg;
        msg << "diffusion tensor needs k_x > 0 and k_y > 0 (got " << k_x << ", " << k_y << ")";
        throw InvalidArgument(msg.str());
    }
    const double delta = k_x * k_y - k_c * k_c;
    if (!(delta > 0.0)) {
        std::ostringstream msg;
        msg << "diffusion tensor is not positive definite (det = " << delta << ")";
        throw InvalidArgument(msg.str());
    }
    return DiffusionTensor(k_x, k_y, k_c, delta);
}

std::array<double, 2> DiffusionTensor::eigenvalues() const noexcept {
    const double half_tr = 0.5 * trace();
    const double half_root = 0.5 * std::sqrt(discriminant());
    const double big = half_tr + half_root;
    // small eigenvalue from det / big avoids cancellation at high anisotropy
    return {big, delta_ / big};
}

DiffusionTensor tensor_from_angle(double theta, double ratio) {
    if (!std::isfinite(theta) || !std::isfinite(ratio)) {
        throw InvalidArgument("tensor_from_angle: non-finite input");
    }
    if (ratio < 1.0) {
        throw InvalidArgument("tensor_from_angle: anisotropy ratio must be >= 1");
    }
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double perp = 1.0 / ratio;
    const double k_x = c * c + s * s * perp;
    const double k_y = s * s + c * c * perp;
    const double k_c = s * c * (1.0 - perp);
    return DiffusionTensor::from_components(k_x, k_y, k_c);
}

DiffusionTensor tensor_from_hall(double omega_x, double omega_y) {
    if (!std::isfinite(omega_x) || !std::isfinite(omega_y)) {
        throw InvalidArgument("tensor_from_hall: non-finite input");
    }
    const double denom = 1.0 + omega_x * omega_x + omega_y * omega_y;
    return DiffusionTensor::from_components((1.0 + omega_x * omega_x) / denom,
                                            (1.0 + omega_y * omega_y) / denom,
                                            omega_x * omega_y / denom);
}

DiffusionTensor tensor_from_direction(double b_x, double b_y, double ratio) {
    if (!std::isfinite(b_x) || !std::isfinite(b_y)) {
        throw InvalidArgument("tensor_from_direction: non-finite input");
    }
    if (b_x == 0.0 && b_y == 0.0) {
        throw DegenerateDirection("tensor_from_direction: zero field vector");
    }
    return tensor_from_angle(std::atan2(b_y, b_x), ratio);
}

}  // namespace hyperdiff
