#pragma once

#include <array>

namespace hyperdiff {

/**
 * Symmetric positive-definite 2x2 diffusion tensor
 *
 *     K = [ k_x  k_c ]
 *         [ k_c  k_y ]
 *
 * Instances are only created through the validating factories, so every
 * value in circulation satisfies k_x > 0, k_y > 0 and det K > 0. The
 * determinant is recomputed at construction and cached.
 */
class DiffusionTensor {
public:
    /// Validating constructor from raw components.
    static DiffusionTensor from_components(double k_x, double k_y, double k_c);

    static DiffusionTensor identity() { return from_components(1.0, 1.0, 0.0); }

    double k_x() const noexcept { return k_x_; }
    double k_y() const noexcept { return k_y_; }
    double k_c() const noexcept { return k_c_; }
    double delta() const noexcept { return delta_; }
    double trace() const noexcept { return k_x_ + k_y_; }

    /// (k_x - k_y)^2 + 4 k_c^2, i.e. trace^2 - 4 det without the cancellation.
    double discriminant() const noexcept { return (k_x_ - k_y_) * (k_x_ - k_y_) + 4.0 * k_c_ * k_c_; }

    /// Eigenvalues in descending order.
    std::array<double, 2> eigenvalues() const noexcept;

    bool operator==(const DiffusionTensor&) const = default;

private:
    DiffusionTensor(double k_x, double k_y, double k_c, double delta)
        : k_x_(k_x), k_y_(k_y), k_c_(k_c), delta_(delta) {}

    double k_x_;
    double k_y_;
    double k_c_;
    double delta_;
};

/// Rotated tensor with parallel coefficient 1 and perpendicular 1/ratio.
/// theta is the angle of the field line measured from the x axis.
DiffusionTensor tensor_from_angle(double theta, double ratio);

/// Nondimensional 2-D mobility tensor for Hall-parameter components.
DiffusionTensor tensor_from_hall(double omega_x, double omega_y);

/// Same as tensor_from_angle(atan2(b_y, b_x), ratio). Throws
/// DegenerateDirection for a zero vector.
DiffusionTensor tensor_from_direction(double b_x, double b_y, double ratio);

}  // namespace hyperdiff
