#pragma once

#include <functional>
#include <string>
#include <vector>

#include "orbitpool/image.hpp"
#include "orbitpool/pooling.hpp"
#include "orbitpool/region.hpp"
#include "orbitpool/report.hpp"

namespace orbitpool {

/// Options shared by the bound checks. The quadrature and interpolation
/// budgets are measured externally (see measure_quadrature_budget /
/// measure_interpolation_budget) and passed in; Monte Carlo slack is
/// computed inside each check from its own estimates.
struct CheckOptions {
    Interp interp = Interp::bicubic;
    double eps_quadrature = 0.0;
    double eps_interpolation = 0.0;
    RateMethod rate_method = RateMethod::slope_fit;
    std::string experiment = "adhoc";
};

namespace detail {

inline Json region_json(const PoolingRegion& region) {
    Json axes = Json::array();
    for (const auto& a : region.axes()) {
        const char* kind = a.kind == AxisKind::angle     ? "theta"
                           : a.kind == AxisKind::trans_x ? "tx"
                           : a.kind == AxisKind::trans_y ? "ty"
                                                         : "shear";
        axes.push_back(Json{{"axis", kind}, {"lo", a.interval.lo}, {"hi", a.interval.hi}});
    }
    return Json{{"group", group_name(region.group())}, {"axes", axes}};
}

inline Json element_json(const GroupElement& g) {
    return Json{{"group", group_name(g.group())},
                {"theta", g.theta()},
                {"tx", g.tx()},
                {"ty", g.ty()},
                {"shear", g.shear_factor()}};
}

inline Json algebra_json(const LieAlgebraElement& xi) {
    return Json{{"group", group_name(xi.group())},
                {"zeta", xi.zeta()},
                {"vx", xi.vx()},
                {"vy", xi.vy()},
                {"shear_rate", xi.shear_rate()}};
}

inline Json grid_json(const ImageGrid& f, Interp interp) {
    return Json{{"half_width", f.half_width()},
                {"resolution", f.resolution()},
                {"interpolation", interp_name(interp)}};
}

inline Json quad_json(const QuadratureSpec& q) {
    return Json{{"angle_nodes", q.angle_nodes}, {"x_nodes", q.x_nodes}, {"y_nodes", q.y_nodes}};
}

inline Json mc_json(const MonteCarloSpec& mc) {
    return Json{{"samples", mc.sample_count}, {"seed", mc.seed}, {"batch", mc.batch}};
}

}  // namespace detail

/// Relative change of ||pool(f)|| when every node count doubles; the
/// measured quadrature budget for a configuration.
inline double measure_quadrature_budget(const ImageGrid& f, const PoolingRegion& region,
                                        const QuadratureSpec& quad,
                                        Interp interp = Interp::bicubic) {
    QuadratureSpec doubled{2 * quad.angle_nodes, 2 * quad.x_nodes, 2 * quad.y_nodes};
    double base = norm2(pool(f, region, quad, interp));
    double fine = norm2(pool(f, region, doubled, interp));
    return fine > 0.0 ? std::abs(base - fine) / fine : 0.0;
}

/// Relative round-trip resampling error under a probe transform; the
/// measured interpolation budget for a grid/interpolation choice.
inline double measure_interpolation_budget(const ImageGrid& f, const GroupElement& probe,
                                           Interp interp = Interp::bicubic) {
    ImageGrid round_trip = act(inverse(probe), act(probe, f, interp), interp);
    return norm2_diff(round_trip, f) / norm2(f);
}

/// Contraction of the averaging operator across a group displacement:
/// || pool(L_g f) - pool(f) || against
/// sqrt(lambda) max(1, sqrt(||J_g||_inf)) mu((G0 g) DELTA G0)/mu(G0) ||f||.
inline VerificationReport theorem1_check(const ImageGrid& f, const GroupElement& g,
                                         const PoolingRegion& region, const QuadratureSpec& quad,
                                         const MonteCarloSpec& mc, const CheckOptions& opts = {}) {
    detail::require_same_group(region.group(), g.group(), "theorem1_check");

    ImageGrid pooled = pool(f, region, quad, opts.interp);
    ImageGrid pooled_moved = pool(act(g, f, opts.interp), region, quad, opts.interp);
    double lhs = norm2_diff(pooled_moved, pooled);

    // all supported groups act with unit Jacobian; keep the factors anyway
    double lambda = jacobian_sup(g);
    double jg = jacobian_sup(g);
    SymdiffMethod method = region.group() == GroupId::translations ? SymdiffMethod::exact
                                                                   : SymdiffMethod::monte_carlo;
    SymdiffEstimate sd = symdiff_measure(region, g, method, mc);
    double mu = haar_measure(region);
    double fnorm = norm2(f);
    double rhs = std::sqrt(lambda) * std::max(1.0, std::sqrt(jg)) * (sd.value / mu) * fnorm;

    VerificationReport rep;
    rep.experiment = opts.experiment;
    rep.check = "theorem1";
    rep.measured_lhs = lhs;
    rep.analytic_rhs = rhs;
    rep.epsilon.quadrature = opts.eps_quadrature;
    rep.epsilon.interpolation = opts.eps_interpolation;
    rep.epsilon.monte_carlo = sd.value > 0.0 ? 3.0 * sd.std_error / sd.value : 0.0;
    rep.noise_floor = 0.0;
    rep.provenance = Json{{"grid", detail::grid_json(f, opts.interp)},
                          {"quadrature", detail::quad_json(quad)},
                          {"region", detail::region_json(region)},
                          {"element", detail::element_json(g)},
                          {"monte_carlo", detail::mc_json(mc)},
                          {"symdiff_method", method == SymdiffMethod::exact ? "exact" : "monte_carlo"},
                          {"symdiff_value", sd.value},
                          {"symdiff_std_error", sd.std_error},
                          {"image_norm", fnorm},
                          {"lambda", lambda}};
    rep.finalize();
    return rep;
}

/// The commutator field of the pooled left-invariant fields at pool(f):
/// [X~_xi, X~_xi'] = -pool(X_[xi,xi'] f). The sign convention is recorded in
/// every report that stores this field's norm.
inline ImageGrid bracket_field(const LieAlgebraElement& xi, const LieAlgebraElement& xi2,
                               const ImageGrid& f, const PoolingRegion& region,
                               const QuadratureSpec& quad, Interp interp = Interp::bicubic) {
    LieAlgebraElement br = bracket(xi, xi2);
    if (br.is_zero()) return ImageGrid(f.half_width(), f.resolution());
    return scaled(pooled_generator_field(br, f, region, quad, interp), -1.0);
}

/// Squared-norm bound on the pooled bracket field:
/// ||[X~_xi, X~_xi']||^2 <= lambda (d/ds mu((G0 exp(s[xi,xi'])) DELTA G0)/mu)^2 ||f||^2.
inline VerificationReport theorem2_check(const ImageGrid& f, const LieAlgebraElement& xi,
                                         const LieAlgebraElement& xi2,
                                         const PoolingRegion& region, const QuadratureSpec& quad,
                                         const MonteCarloSpec& mc, const CheckOptions& opts = {}) {
    detail::require_same_group(region.group(), xi.group(), "theorem2_check");

    ImageGrid bf = bracket_field(xi, xi2, f, region, quad, opts.interp);
    double bf_norm = norm2(bf);
    double lhs = bf_norm * bf_norm;

    LieAlgebraElement br = bracket(xi, xi2);
    double lambda = 1.0;  // unit-Jacobian groups
    RateEstimate rate{0.0, 0.0};
    if (!br.is_zero()) rate = symdiff_rate(region, br, opts.rate_method, mc);
    double fnorm = norm2(f);
    double rhs = lambda * rate.value * rate.value * fnorm * fnorm;

    VerificationReport rep;
    rep.experiment = opts.experiment;
    rep.check = "theorem2";
    rep.measured_lhs = lhs;
    rep.analytic_rhs = rhs;
    // the left side is a squared norm, so the linear budgets enter twice;
    // the rate enters the right side squared, so its residual does too
    rep.epsilon.quadrature = 2.0 * opts.eps_quadrature;
    rep.epsilon.interpolation = 2.0 * opts.eps_interpolation;
    rep.epsilon.monte_carlo = 2.0 * rate.fit_residual;
    rep.noise_floor = 1e-10 * fnorm * fnorm;
    rep.provenance =
        Json{{"grid", detail::grid_json(f, opts.interp)},
             {"quadrature", detail::quad_json(quad)},
             {"region", detail::region_json(region)},
             {"xi", detail::algebra_json(xi)},
             {"xi_prime", detail::algebra_json(xi2)},
             {"bracket", detail::algebra_json(br)},
             {"bracket_sign_convention", "minus_pooled_generator_of_bracket"},
             {"monte_carlo", detail::mc_json(mc)},
             {"rate_method", opts.rate_method == RateMethod::closed_form ? "closed_form"
                                                                         : "slope_fit"},
             {"rate_value", rate.value},
             {"rate_fit_residual", rate.fit_residual},
             {"image_norm", fnorm},
             {"lambda", lambda}};
    rep.finalize();
    return rep;
}

/// Sectional curvature of the plane spanned by two pooled generator fields,
/// normalized through the Gram determinant (equivalent to orthonormalizing
/// the pair first, since the bracket is bilinear in the generators), and the
/// matching bound from the symmetric-difference rate.
struct CurvatureEstimate {
    double kappa_hat = 0.0;
    double bound = 0.0;
    double gram_xx = 0.0, gram_xy = 0.0, gram_yy = 0.0;
    double gram_det = 0.0;
    double bracket_norm = 0.0;
    RateEstimate rate;
};

inline CurvatureEstimate sectional_curvature(const ImageGrid& f, const LieAlgebraElement& xi,
                                             const LieAlgebraElement& xi2,
                                             const PoolingRegion& region,
                                             const QuadratureSpec& quad, const MonteCarloSpec& mc,
                                             const CheckOptions& opts = {}) {
    detail::require_same_group(region.group(), xi.group(), "sectional_curvature");
    // the curvature formula requires the bi-invariant metric, which needs
    // unit Jacobians
    if (jacobian_sup(exponential(xi, 1.0)) != 1.0 || jacobian_sup(exponential(xi2, 1.0)) != 1.0)
        throw InvalidArgument("sectional_curvature: action must be area preserving");

    ImageGrid a = pooled_generator_field(xi, f, region, quad, opts.interp);
    ImageGrid b = pooled_generator_field(xi2, f, region, quad, opts.interp);

    CurvatureEstimate est;
    est.gram_xx = inner(a, a);
    est.gram_xy = inner(a, b);
    est.gram_yy = inner(b, b);
    est.gram_det = est.gram_xx * est.gram_yy - est.gram_xy * est.gram_xy;
    if (est.gram_det <= 1e-10 * est.gram_xx * est.gram_yy)
        throw DegenerateBasis("sectional_curvature: pooled generator fields are nearly dependent");

    ImageGrid bf = bracket_field(xi, xi2, f, region, quad, opts.interp);
    est.bracket_norm = norm2(bf);
    est.kappa_hat = 0.25 * est.bracket_norm * est.bracket_norm / est.gram_det;

    LieAlgebraElement br = bracket(xi, xi2);
    est.rate = br.is_zero() ? RateEstimate{0.0, 0.0}
                            : symdiff_rate(region, br, opts.rate_method, mc);
    double fnorm = norm2(f);
    est.bound = 0.25 * est.rate.value * est.rate.value * fnorm * fnorm / est.gram_det;
    return est;
}

/// One row of a contraction profile: how the raw displacement distance and
/// the pooled distance compare across region sizes and flow times.
struct ContractionRow {
    double region_scale = 0.0;
    double flow_time = 0.0;
    double raw = 0.0;
    double pooled = 0.0;
    double ratio = 1.0;  // pooled / raw; defined 1 when both vanish
    double theorem1_rhs = 0.0;
};

/// Profiles || pool(L_exp(t xi) f) - pool(f) || / || L_exp(t xi) f - f ||
/// over a family of regions and flow times, with the contraction bound
/// evaluated per row.
inline std::vector<ContractionRow> contraction_profile(
    const ImageGrid& f, const std::function<PoolingRegion(double)>& region_family,
    const std::vector<double>& region_scales, const LieAlgebraElement& xi,
    const std::vector<double>& flow_times, const QuadratureSpec& quad, const MonteCarloSpec& mc,
    const CheckOptions& opts = {}) {
    std::vector<ContractionRow> rows;
    double fnorm = norm2(f);
    for (double a : region_scales) {
        PoolingRegion region = region_family(a);
        double mu = haar_measure(region);
        ImageGrid pooled_base = pool(f, region, quad, opts.interp);
        for (double t : flow_times) {
            GroupElement g = exponential(xi, t);
            ContractionRow row;
            row.region_scale = a;
            row.flow_time = t;
            if (t == 0.0) {
                row.raw = 0.0;
                row.pooled = 0.0;
                row.ratio = 1.0;
                row.theorem1_rhs = 0.0;
            } else {
                ImageGrid moved = act(g, f, opts.interp);
                row.raw = norm2_diff(moved, f);
                row.pooled = norm2_diff(pool(moved, region, quad, opts.interp), pooled_base);
                row.ratio = row.raw > 0.0 ? row.pooled / row.raw : 1.0;
                SymdiffMethod method = region.group() == GroupId::translations
                                           ? SymdiffMethod::exact
                                           : SymdiffMethod::monte_carlo;
                SymdiffEstimate sd = symdiff_measure(region, g, method, mc);
                row.theorem1_rhs = (sd.value / mu) * fnorm;
            }
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace orbitpool
