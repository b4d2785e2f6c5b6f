#include <catch2/catch_amalgamated.hpp>

#include "orbitpool/group.hpp"
#include "support/oracles.hpp"

using namespace orbitpool;
using Catch::Matchers::WithinAbs;

TEST_CASE("compose: translation addition") {
    auto g = compose(GroupElement::translation(1, 0), GroupElement::translation(0, 1));
    CHECK(g.tx() == 1.0);
    CHECK(g.ty() == 1.0);
}

TEST_CASE("compose: rotation then translation, against the matrix product") {
    auto a = GroupElement::se2(kPi / 2, 0, 0);
    auto b = GroupElement::se2(0, 1, 0);
    auto g = compose(a, b);
    CHECK_THAT(g.theta(), WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(g.tx(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(g.ty(), WithinAbs(1.0, 1e-15));
    CHECK(oracles::max_abs_diff(g.matrix(), a.matrix() * b.matrix()) < 1e-15);
}

TEST_CASE("compose matches the 3x3 matrix product on random pairs") {
    oracles::RandomElements rnd(11);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 200; ++i) {
            auto a = rnd.element(id), b = rnd.element(id);
            CHECK(oracles::max_abs_diff(compose(a, b).matrix(), a.matrix() * b.matrix()) < 1e-12);
        }
    }
}

TEST_CASE("compose rejects mixed groups") {
    CHECK_THROWS_AS(compose(GroupElement::translation(1, 0), GroupElement::rotation(0.5)),
                    InvalidArgument);
}

TEST_CASE("associativity on random triples") {
    oracles::RandomElements rnd(17);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 250; ++i) {
            auto a = rnd.element(id), b = rnd.element(id), c = rnd.element(id);
            auto lhs = compose(compose(a, b), c);
            auto rhs = compose(a, compose(b, c));
            CHECK(parameter_distance(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("inverse: closed forms and group axiom") {
    auto gi = inverse(GroupElement::translation(1, 2));
    CHECK(gi.tx() == -1.0);
    CHECK(gi.ty() == -2.0);

    auto ri = inverse(GroupElement::se2(kPi / 2, 1, 0));
    CHECK_THAT(ri.theta(), WithinAbs(-kPi / 2, 1e-15));
    CHECK_THAT(ri.tx(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(ri.ty(), WithinAbs(1.0, 1e-15));

    for (auto id : oracles::kAllGroups)
        CHECK(inverse(GroupElement::identity(id)).is_identity());

    oracles::RandomElements rnd(23);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 250; ++i) {
            auto g = rnd.element(id);
            CHECK(parameter_distance(compose(g, inverse(g)), GroupElement::identity(id)) < 1e-12);
            CHECK(parameter_distance(compose(inverse(g), g), GroupElement::identity(id)) < 1e-12);
            // matrix-inverse oracle
            Eigen::Matrix3d mi = g.matrix().inverse();
            CHECK(oracles::max_abs_diff(inverse(g).matrix(), mi) < 1e-12);
        }
    }
}

TEST_CASE("exponential: pure translation and the quarter-turn case") {
    auto g = exponential(LieAlgebraElement::translation(1, 2), 1.0);
    CHECK(g.tx() == 1.0);
    CHECK(g.ty() == 2.0);

    auto q = exponential(LieAlgebraElement::se2(kPi / 2, 1, 0), 1.0);
    CHECK_THAT(q.theta(), WithinAbs(kPi / 2, 1e-15));
    CHECK_THAT(q.tx(), WithinAbs(2.0 / kPi, 1e-14));
    CHECK_THAT(q.ty(), WithinAbs(2.0 / kPi, 1e-14));
}

TEST_CASE("exponential matches the numeric matrix exponential") {
    oracles::RandomElements rnd(31);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 250; ++i) {
            auto xi = rnd.algebra(id);
            double t = rnd.uniform(-1.0, 1.0);
            if (std::abs(t * xi.zeta()) > kPi) continue;  // stay on the principal branch
            auto g = exponential(xi, t);
            Eigen::Matrix3d ref = oracles::expm(Eigen::Matrix3d(t * xi.matrix()));
            CHECK(oracles::max_abs_diff(g.matrix(), ref) < 1e-9);
        }
    }
}

TEST_CASE("exponential: small-angle series branch stays consistent") {
    // straddle the series/closed-form switch
    for (double zeta : {1e-6, 5e-5, 9.9e-5, 1.01e-4, 1e-3}) {
        auto xi = LieAlgebraElement::se2(zeta, 1.0, -2.0);
        auto g = exponential(xi, 1.0);
        Eigen::Matrix3d ref = oracles::expm(xi.matrix());
        CHECK(oracles::max_abs_diff(g.matrix(), ref) < 1e-12);
    }
}

TEST_CASE("exponential: one-parameter subgroup property") {
    oracles::RandomElements rnd(37);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 100; ++i) {
            auto xi = rnd.algebra(id);
            double s = rnd.uniform(-0.5, 0.5), t = rnd.uniform(-0.5, 0.5);
            auto lhs = compose(exponential(xi, s), exponential(xi, t));
            auto rhs = exponential(xi, s + t);
            CHECK(parameter_distance(lhs, rhs) < 1e-12);
        }
    }
}

TEST_CASE("bracket: closed form equals the matrix commutator") {
    auto b = bracket(LieAlgebraElement::se2(1, 0, 0), LieAlgebraElement::se2(0, 1, 0));
    CHECK(b.zeta() == 0.0);
    CHECK(b.vx() == 0.0);
    CHECK(b.vy() == 1.0);

    auto c = bracket(LieAlgebraElement::se2(0, 1, 0), LieAlgebraElement::se2(0, 0, 1));
    CHECK(c.is_zero());

    oracles::RandomElements rnd(41);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 250; ++i) {
            auto x = rnd.algebra(id), y = rnd.algebra(id);
            Eigen::Matrix3d comm = x.matrix() * y.matrix() - y.matrix() * x.matrix();
            CHECK(oracles::max_abs_diff(bracket(x, y).matrix(), comm) < 1e-14);
        }
    }
}

TEST_CASE("bracket: antisymmetry and Jacobi identity") {
    oracles::RandomElements rnd(43);
    auto norm = [](const LieAlgebraElement& x) {
        return std::abs(x.zeta()) + std::abs(x.vx()) + std::abs(x.vy()) +
               std::abs(x.shear_rate());
    };
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 250; ++i) {
            auto x = rnd.algebra(id), y = rnd.algebra(id), z = rnd.algebra(id);
            CHECK(norm(bracket(x, x)) == 0.0);
            // [x,y] + [y,x] = 0
            Eigen::Matrix3d anti = bracket(x, y).matrix() + bracket(y, x).matrix();
            CHECK(anti.cwiseAbs().maxCoeff() < 1e-12);
            // [x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0
            Eigen::Matrix3d jac = bracket(x, bracket(y, z)).matrix() +
                                  bracket(y, bracket(z, x)).matrix() +
                                  bracket(z, bracket(x, y)).matrix();
            CHECK(jac.cwiseAbs().maxCoeff() < 1e-12);
        }
    }
    CHECK_THROWS_AS(
        bracket(LieAlgebraElement::translation(1, 0), LieAlgebraElement::rotation(1)),
        InvalidArgument);
}

TEST_CASE("apply_to_point") {
    Eigen::Vector2d p = apply_to_point(GroupElement::translation(1, 2), {3, 4});
    CHECK(p.x() == 4.0);
    CHECK(p.y() == 6.0);

    Eigen::Vector2d q = apply_to_point(GroupElement::rotation(kPi / 2), {1, 0});
    CHECK_THAT(q.x(), WithinAbs(0.0, 1e-15));
    CHECK_THAT(q.y(), WithinAbs(1.0, 1e-15));

    Eigen::Vector2d r = apply_to_point(GroupElement::se2(kPi / 2, 1, 0), {1, 0});
    CHECK_THAT(r.x(), WithinAbs(1.0, 1e-15));
    CHECK_THAT(r.y(), WithinAbs(1.0, 1e-15));

    // matrix-vector oracle on random elements
    oracles::RandomElements rnd(47);
    for (auto id : oracles::kAllGroups) {
        for (int i = 0; i < 100; ++i) {
            auto g = rnd.element(id);
            Eigen::Vector2d x(rnd.uniform(-3, 3), rnd.uniform(-3, 3));
            Eigen::Vector3d h = g.matrix() * Eigen::Vector3d(x.x(), x.y(), 1.0);
            Eigen::Vector2d y = apply_to_point(g, x);
            CHECK_THAT(y.x(), WithinAbs(h.x(), 1e-13));
            CHECK_THAT(y.y(), WithinAbs(h.y(), 1e-13));
        }
    }
}

TEST_CASE("jacobian_sup is one for every supported group") {
    oracles::RandomElements rnd(53);
    for (auto id : oracles::kAllGroups) {
        CHECK(jacobian_sup(GroupElement::identity(id)) == 1.0);
        for (int i = 0; i < 20; ++i) {
            auto g = rnd.element(id);
            CHECK(jacobian_sup(g) == 1.0);
            // determinant of the linear part really is one
            CHECK_THAT(g.linear().determinant(), WithinAbs(1.0, 1e-14));
        }
    }
}

TEST_CASE("theta stays normalized to (-pi, pi]") {
    auto g = GroupElement::rotation(3 * kPi);
    CHECK_THAT(g.theta(), WithinAbs(kPi, 1e-12));
    auto h = GroupElement::se2(-3 * kPi, 0, 0);
    CHECK_THAT(h.theta(), WithinAbs(kPi, 1e-12));
    oracles::RandomElements rnd(59);
    for (int i = 0; i < 100; ++i) {
        auto a = rnd.element(GroupId::se2), b = rnd.element(GroupId::se2);
        auto c = compose(a, b);
        CHECK(c.theta() > -kPi);
        CHECK(c.theta() <= kPi);
    }
}
