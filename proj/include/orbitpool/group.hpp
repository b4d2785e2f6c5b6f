#pragma once

#include <cmath>
#include <string>

#include <Eigen/Core>

#include "orbitpool/errors.hpp"

namespace orbitpool {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// The supported unimodular transformation groups of the plane.
enum class GroupId { translations, rotations, se2, shear };

inline const char* group_name(GroupId id) {
    switch (id) {
        case GroupId::translations: return "translations";
        case GroupId::rotations: return "rotations";
        case GroupId::se2: return "se2";
        case GroupId::shear: return "shear";
    }
    return "?";
}

/// Normalizes an angle to (-pi, pi].
inline double normalize_angle(double theta) {
    double t = std::remainder(theta, 2.0 * kPi);
    if (t <= -kPi) t += 2.0 * kPi;
    return t;
}

namespace detail {

inline void require_same_group(GroupId a, GroupId b, const char* op) {
    if (a != b) {
        throw InvalidArgument(std::string(op) + ": group mismatch (" + group_name(a) +
                              " vs " + group_name(b) + ")");
    }
}

}  // namespace detail

/// A group element in canonical parameters. The stored form is the
/// parameter tuple; the homogeneous 3x3 matrix is a derived view.
///
///   translations: (tx, ty)           x -> x + t
///   rotations:    theta              x -> R(theta) x
///   se2:          (theta, tx, ty)    x -> R(theta) x + t
///   shear:        (s, tx, ty)        (x, y) -> (x + s y + tx, y + ty)
///
/// All four families act with unit Jacobian determinant.
class GroupElement {
public:
    static GroupElement identity(GroupId id) { return GroupElement(id, 0.0, 0.0, 0.0, 0.0); }

    static GroupElement translation(double tx, double ty) {
        return GroupElement(GroupId::translations, 0.0, tx, ty, 0.0);
    }

    static GroupElement rotation(double theta) {
        return GroupElement(GroupId::rotations, normalize_angle(theta), 0.0, 0.0, 0.0);
    }

    static GroupElement se2(double theta, double tx, double ty) {
        return GroupElement(GroupId::se2, normalize_angle(theta), tx, ty, 0.0);
    }

    static GroupElement shear(double s, double tx, double ty) {
        return GroupElement(GroupId::shear, 0.0, tx, ty, s);
    }

    GroupId group() const { return group_; }
    double theta() const { return theta_; }
    double tx() const { return tx_; }
    double ty() const { return ty_; }
    double shear_factor() const { return shear_; }

    Eigen::Vector2d translation_part() const { return {tx_, ty_}; }

    /// The 2x2 linear part of the action.
    Eigen::Matrix2d linear() const {
        Eigen::Matrix2d m;
        switch (group_) {
            case GroupId::translations:
                m.setIdentity();
                break;
            case GroupId::rotations:
            case GroupId::se2: {
                double c = std::cos(theta_), s = std::sin(theta_);
                m << c, -s, s, c;
                break;
            }
            case GroupId::shear:
                m << 1.0, shear_, 0.0, 1.0;
                break;
        }
        return m;
    }

    /// Homogeneous 3x3 matrix view of the element.
    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
        m.topLeftCorner<2, 2>() = linear();
        m(0, 2) = tx_;
        m(1, 2) = ty_;
        return m;
    }

    bool is_identity(double tol = 0.0) const {
        return std::abs(theta_) <= tol && std::abs(tx_) <= tol && std::abs(ty_) <= tol &&
               std::abs(shear_) <= tol;
    }

private:
    GroupElement(GroupId id, double theta, double tx, double ty, double shear)
        : group_(id), theta_(theta), tx_(tx), ty_(ty), shear_(shear) {}

    GroupId group_;
    double theta_;
    double tx_, ty_;
    double shear_;
};

/// A Lie algebra element (infinitesimal generator) in the same canonical
/// coordinates: zeta is the rotation rate, (vx, vy) the translation rates,
/// and sigma the shear rate. The matrix view is
///
///   [ 0   -zeta + sigma   vx ]
///   [ zeta      0         vy ]
///   [ 0         0          0 ]
///
/// restricted per group (translations: zeta = sigma = 0, etc.).
class LieAlgebraElement {
public:
    static LieAlgebraElement zero(GroupId id) { return LieAlgebraElement(id, 0.0, 0.0, 0.0, 0.0); }

    static LieAlgebraElement translation(double vx, double vy) {
        return LieAlgebraElement(GroupId::translations, 0.0, vx, vy, 0.0);
    }

    static LieAlgebraElement rotation(double zeta) {
        return LieAlgebraElement(GroupId::rotations, zeta, 0.0, 0.0, 0.0);
    }

    static LieAlgebraElement se2(double zeta, double vx, double vy) {
        return LieAlgebraElement(GroupId::se2, zeta, vx, vy, 0.0);
    }

    static LieAlgebraElement shear(double sigma, double vx, double vy) {
        return LieAlgebraElement(GroupId::shear, 0.0, vx, vy, sigma);
    }

    GroupId group() const { return group_; }
    double zeta() const { return zeta_; }
    double vx() const { return vx_; }
    double vy() const { return vy_; }
    double shear_rate() const { return shear_rate_; }

    bool is_zero() const {
        return zeta_ == 0.0 && vx_ == 0.0 && vy_ == 0.0 && shear_rate_ == 0.0;
    }

    LieAlgebraElement scaled(double c) const {
        return LieAlgebraElement(group_, c * zeta_, c * vx_, c * vy_, c * shear_rate_);
    }

    Eigen::Matrix3d matrix() const {
        Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
        m(0, 1) = -zeta_ + shear_rate_;
        m(1, 0) = zeta_;
        m(0, 2) = vx_;
        m(1, 2) = vy_;
        return m;
    }

    /// Velocity of the point flow at p: d/dt exp(t xi) p at t = 0.
    Eigen::Vector2d velocity_at(const Eigen::Vector2d& p) const {
        return {vx_ - zeta_ * p.y() + shear_rate_ * p.y(), vy_ + zeta_ * p.x()};
    }

private:
    LieAlgebraElement(GroupId id, double zeta, double vx, double vy, double sigma)
        : group_(id), zeta_(zeta), vx_(vx), vy_(vy), shear_rate_(sigma) {}

    GroupId group_;
    double zeta_;
    double vx_, vy_;
    double shear_rate_;
};

/// Group product. Parameters compose as (A1, t1) * (A2, t2) = (A1 A2, t1 + A1 t2)
/// with the angle (or shear factor) adding.
inline GroupElement compose(const GroupElement& g1, const GroupElement& g2) {
    detail::require_same_group(g1.group(), g2.group(), "compose");
    Eigen::Vector2d t = g1.translation_part() + g1.linear() * g2.translation_part();
    switch (g1.group()) {
        case GroupId::translations:
            return GroupElement::translation(t.x(), t.y());
        case GroupId::rotations:
            return GroupElement::rotation(g1.theta() + g2.theta());
        case GroupId::se2:
            return GroupElement::se2(g1.theta() + g2.theta(), t.x(), t.y());
        case GroupId::shear:
            return GroupElement::shear(g1.shear_factor() + g2.shear_factor(), t.x(), t.y());
    }
    throw InvalidArgument("compose: unknown group");
}

inline GroupElement inverse(const GroupElement& g) {
    switch (g.group()) {
        case GroupId::translations:
            return GroupElement::translation(-g.tx(), -g.ty());
        case GroupId::rotations:
            return GroupElement::rotation(-g.theta());
        case GroupId::se2: {
            double c = std::cos(g.theta()), s = std::sin(g.theta());
            // -R(-theta) t
            double tx = -(c * g.tx() + s * g.ty());
            double ty = -(-s * g.tx() + c * g.ty());
            return GroupElement::se2(-g.theta(), tx, ty);
        }
        case GroupId::shear: {
            double s = g.shear_factor();
            return GroupElement::shear(-s, -(g.tx() - s * g.ty()), -g.ty());
        }
    }
    throw InvalidArgument("inverse: unknown group");
}

namespace detail {

// sin(x)/x and (1-cos(x))/x with series fallback near zero.
inline void sinc_versine(double x, double& sinc, double& versine) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        sinc = 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
        versine = x * (0.5 - x2 / 24.0 + x2 * x2 / 720.0 - x2 * x2 * x2 / 40320.0);
    } else {
        sinc = std::sin(x) / x;
        versine = (1.0 - std::cos(x)) / x;
    }
}

}  // namespace detail

/// Exponential map evaluated at flow time t: exp(t xi).
///
/// For the rigid-motion families the translation part is V(t zeta) * t * v
/// with V the usual SE(2) left Jacobian; for shears it follows from the
/// generator being nilpotent of order three.
inline GroupElement exponential(const LieAlgebraElement& xi, double t = 1.0) {
    double vx = t * xi.vx(), vy = t * xi.vy();
    switch (xi.group()) {
        case GroupId::translations:
            return GroupElement::translation(vx, vy);
        case GroupId::rotations:
            return GroupElement::rotation(t * xi.zeta());
        case GroupId::se2: {
            double phi = t * xi.zeta();
            double sinc, versine;
            detail::sinc_versine(phi, sinc, versine);
            double tx = sinc * vx - versine * vy;
            double ty = versine * vx + sinc * vy;
            return GroupElement::se2(phi, tx, ty);
        }
        case GroupId::shear: {
            double sig = t * xi.shear_rate();
            // exp of [[0,sig,vx],[0,0,vy],[0,0,0]] truncates at second order
            return GroupElement::shear(sig, vx + 0.5 * sig * vy, vy);
        }
    }
    throw InvalidArgument("exponential: unknown group");
}

/// Lie bracket in canonical coordinates. For the rigid motions this is
/// [xi(z,x,y), xi(z',x',y')] = xi(0, z'y - z y', z x' - z' x); for shears
/// the commutator lands on the x-translation generator.
inline LieAlgebraElement bracket(const LieAlgebraElement& a, const LieAlgebraElement& b) {
    detail::require_same_group(a.group(), b.group(), "bracket");
    switch (a.group()) {
        case GroupId::translations:
            return LieAlgebraElement::zero(GroupId::translations);
        case GroupId::rotations:
            return LieAlgebraElement::zero(GroupId::rotations);
        case GroupId::se2:
            return LieAlgebraElement::se2(0.0, b.zeta() * a.vy() - a.zeta() * b.vy(),
                                          a.zeta() * b.vx() - b.zeta() * a.vx());
        case GroupId::shear:
            return LieAlgebraElement::shear(
                0.0, a.shear_rate() * b.vy() - b.shear_rate() * a.vy(), 0.0);
    }
    throw InvalidArgument("bracket: unknown group");
}

/// Action of g on a plane point.
inline Eigen::Vector2d apply_to_point(const GroupElement& g, const Eigen::Vector2d& p) {
    return g.linear() * p + g.translation_part();
}

/// sup over the plane of |det Jacobian| of the action of g. All supported
/// groups are area preserving, so this is one; it is kept explicit so the
/// contraction and curvature bounds carry their lambda factors verbatim.
inline double jacobian_sup(const GroupElement&) { return 1.0; }

/// Maximum absolute difference between canonical parameters; both angles
/// compared on the circle.
inline double parameter_distance(const GroupElement& a, const GroupElement& b) {
    detail::require_same_group(a.group(), b.group(), "parameter_distance");
    double d = std::abs(normalize_angle(a.theta() - b.theta()));
    d = std::max(d, std::abs(a.tx() - b.tx()));
    d = std::max(d, std::abs(a.ty() - b.ty()));
    d = std::max(d, std::abs(a.shear_factor() - b.shear_factor()));
    return d;
}

}  // namespace orbitpool
