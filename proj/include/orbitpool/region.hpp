#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "orbitpool/errors.hpp"
#include "orbitpool/group.hpp"
#include "orbitpool/parallel.hpp"
#include "orbitpool/rng.hpp"

namespace orbitpool {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double length() const { return hi - lo; }
    double midpoint() const { return 0.5 * (lo + hi); }
    bool degenerate() const { return hi == lo; }
    bool contains(double x) const { return x >= lo && x <= hi; }

    Interval shifted(double d) const { return {lo + d, hi + d}; }
    Interval hull(const Interval& other) const {
        return {std::min(lo, other.lo), std::max(hi, other.hi)};
    }
};

enum class AxisKind { angle, trans_x, trans_y, shear };

struct Axis {
    AxisKind kind;
    Interval interval;
};

namespace detail {

inline double wrap_2pi(double x) {
    double y = std::fmod(x, 2.0 * kPi);
    if (y < 0.0) y += 2.0 * kPi;
    return y;
}

// range of cos over [lo, hi] (interval of any length)
inline Interval cos_range(double lo, double hi) {
    double a = std::min(std::cos(lo), std::cos(hi));
    double b = std::max(std::cos(lo), std::cos(hi));
    if (hi - lo >= 2.0 * kPi) return {-1.0, 1.0};
    // cos hits +1 at multiples of 2pi, -1 at odd multiples of pi
    double k_hi = std::ceil(lo / (2.0 * kPi)) * 2.0 * kPi;
    if (k_hi <= hi) b = 1.0;
    double k_lo = std::ceil((lo - kPi) / (2.0 * kPi)) * 2.0 * kPi + kPi;
    if (k_lo <= hi) a = -1.0;
    return {a, b};
}

inline Interval sin_range(double lo, double hi) {
    Interval c = cos_range(lo - 0.5 * kPi, hi - 0.5 * kPi);
    return c;
}

}  // namespace detail

/// A compact box in group-parameter coordinates, carrying the (product
/// Lebesgue) Haar measure of the groups supported here.
class PoolingRegion {
public:
    static PoolingRegion translations_box(Interval tx, Interval ty) {
        PoolingRegion r(GroupId::translations, {Axis{AxisKind::trans_x, tx},
                                                Axis{AxisKind::trans_y, ty}});
        r.require_nondegenerate();
        return r;
    }

    static PoolingRegion rotations_arc(Interval theta) {
        PoolingRegion r(GroupId::rotations, {Axis{AxisKind::angle, theta}});
        r.require_nondegenerate();
        return r;
    }

    static PoolingRegion se2_box(Interval theta, Interval tx, Interval ty) {
        PoolingRegion r(GroupId::se2, {Axis{AxisKind::angle, theta}, Axis{AxisKind::trans_x, tx},
                                       Axis{AxisKind::trans_y, ty}});
        r.require_nondegenerate();
        return r;
    }

    static PoolingRegion shear_box(Interval shear, Interval tx, Interval ty) {
        PoolingRegion r(GroupId::shear, {Axis{AxisKind::shear, shear},
                                         Axis{AxisKind::trans_x, tx}, Axis{AxisKind::trans_y, ty}});
        r.require_nondegenerate();
        return r;
    }

    /// Degenerate boxes (point intervals on some or all axes) are only
    /// constructible through this factory; they carry zero Haar measure and
    /// exist for identity-pooling and invariance tests.
    static PoolingRegion degenerate(GroupId group, std::vector<Axis> axes) {
        PoolingRegion r(group, std::move(axes));
        r.validate_axes(/*allow_degenerate=*/true);
        return r;
    }

    GroupId group() const { return group_; }
    const std::vector<Axis>& axes() const { return axes_; }
    std::size_t dims() const { return axes_.size(); }

    const Interval* axis(AxisKind kind) const {
        for (const auto& a : axes_)
            if (a.kind == kind) return &a.interval;
        return nullptr;
    }

    GroupElement element_from_coords(const double* c) const {
        switch (group_) {
            case GroupId::translations:
                return GroupElement::translation(c[0], c[1]);
            case GroupId::rotations:
                return GroupElement::rotation(c[0]);
            case GroupId::se2:
                return GroupElement::se2(c[0], c[1], c[2]);
            case GroupId::shear:
                return GroupElement::shear(c[0], c[1], c[2]);
        }
        throw InvalidArgument("element_from_coords: unknown group");
    }

    std::array<double, 3> coords_of(const GroupElement& g) const {
        detail::require_same_group(group_, g.group(), "coords_of");
        switch (group_) {
            case GroupId::translations:
                return {g.tx(), g.ty(), 0.0};
            case GroupId::rotations:
                return {g.theta(), 0.0, 0.0};
            case GroupId::se2:
                return {g.theta(), g.tx(), g.ty()};
            case GroupId::shear:
                return {g.shear_factor(), g.tx(), g.ty()};
        }
        throw InvalidArgument("coords_of: unknown group");
    }

private:
    PoolingRegion(GroupId group, std::vector<Axis> axes)
        : group_(group), axes_(std::move(axes)) {}

    void require_nondegenerate() const { validate_axes(false); }

    void validate_axes(bool allow_degenerate) const {
        for (const auto& a : axes_) {
            if (!(a.interval.hi >= a.interval.lo))
                throw InvalidArgument("PoolingRegion: inverted interval");
            if (!allow_degenerate && a.interval.length() <= 0.0)
                throw InvalidArgument("PoolingRegion: empty interval on an axis");
            if (a.kind == AxisKind::angle && a.interval.length() > 2.0 * kPi + 1e-12)
                throw InvalidArgument("PoolingRegion: angle interval longer than full circle");
        }
    }

    GroupId group_;
    std::vector<Axis> axes_;
};

/// Haar volume: the product of the interval lengths (Lebesgue on each
/// coordinate, which is the bi-invariant measure for all supported groups).
inline double haar_measure(const PoolingRegion& region) {
    double m = 1.0;
    for (const auto& a : region.axes()) m *= a.interval.length();
    return m;
}

/// Membership with closed intervals; angles are compared on the circle
/// (intervals no longer than the full circle).
inline bool region_contains(const PoolingRegion& region, const GroupElement& g) {
    detail::require_same_group(region.group(), g.group(), "region_contains");
    auto c = region.coords_of(g);
    std::size_t i = 0;
    for (const auto& a : region.axes()) {
        double x = c[i++];
        if (a.kind == AxisKind::angle) {
            double d = detail::wrap_2pi(x - a.interval.lo);
            if (d > a.interval.length() && !(a.interval.length() >= 2.0 * kPi)) return false;
        } else {
            if (!a.interval.contains(x)) return false;
        }
    }
    return true;
}

struct MonteCarloSpec {
    std::uint64_t sample_count = 1'000'000;
    std::uint64_t seed = 0x07b17b001ULL;
    std::uint32_t batch = 65536;
};

struct SymdiffEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

enum class SymdiffMethod { exact, monte_carlo };

namespace detail {

// Parameter-space bounding box of the right coset (region * g): each axis of
// the box, accounting for the rotation/shear of the translation displacement
// across the region's angle/shear interval.
inline std::vector<Interval> coset_param_box(const PoolingRegion& region, const GroupElement& g) {
    std::vector<Interval> out;
    out.reserve(region.dims());
    const Interval* theta = region.axis(AxisKind::angle);
    const Interval* shear = region.axis(AxisKind::shear);
    for (const auto& a : region.axes()) {
        switch (a.kind) {
            case AxisKind::angle:
                out.push_back(a.interval.shifted(g.theta()));
                break;
            case AxisKind::shear:
                out.push_back(a.interval.shifted(g.shear_factor()));
                break;
            case AxisKind::trans_x: {
                Interval d{g.tx(), g.tx()};
                if (theta) {
                    Interval c = cos_range(theta->lo, theta->hi);
                    Interval s = sin_range(theta->lo, theta->hi);
                    // x-component of R(theta) t over the whole arc
                    double cands[4] = {c.lo * g.tx() - s.lo * g.ty(), c.lo * g.tx() - s.hi * g.ty(),
                                       c.hi * g.tx() - s.lo * g.ty(), c.hi * g.tx() - s.hi * g.ty()};
                    d = {*std::min_element(cands, cands + 4), *std::max_element(cands, cands + 4)};
                } else if (shear) {
                    double x1 = g.tx() + shear->lo * g.ty();
                    double x2 = g.tx() + shear->hi * g.ty();
                    d = {std::min(x1, x2), std::max(x1, x2)};
                }
                out.push_back({a.interval.lo + d.lo, a.interval.hi + d.hi});
                break;
            }
            case AxisKind::trans_y: {
                Interval d{g.ty(), g.ty()};
                if (theta) {
                    Interval c = cos_range(theta->lo, theta->hi);
                    Interval s = sin_range(theta->lo, theta->hi);
                    double cands[4] = {s.lo * g.tx() + c.lo * g.ty(), s.lo * g.tx() + c.hi * g.ty(),
                                       s.hi * g.tx() + c.lo * g.ty(), s.hi * g.tx() + c.hi * g.ty()};
                    d = {*std::min_element(cands, cands + 4), *std::max_element(cands, cands + 4)};
                }
                out.push_back({a.interval.lo + d.lo, a.interval.hi + d.hi});
                break;
            }
        }
    }
    return out;
}

struct HitCounter {
    std::uint64_t hits = 0;
    std::uint64_t total = 0;
};

// Uniform sampling over a parameter box with one RNG lane per axis; the
// predicate sees the group element built from the sampled coordinates.
// Hit counts are integers, so the result is schedule independent.
template <typename Pred>
HitCounter mc_count(const PoolingRegion& region, const std::vector<Interval>& box,
                    const MonteCarloSpec& mc, Pred&& pred) {
    std::size_t dims = box.size();
    std::array<CounterRng, 3> lanes = {CounterRng(mc.seed, 101), CounterRng(mc.seed, 202),
                                       CounterRng(mc.seed, 303)};
    std::uint64_t n = mc.sample_count;
    std::uint64_t batch = mc.batch > 0 ? mc.batch : 1;
    std::uint64_t nbatches = (n + batch - 1) / batch;
    std::vector<std::uint64_t> batch_hits(nbatches, 0);
    parallel_for(nbatches, [&](std::size_t b) {
        std::uint64_t lo = b * batch;
        std::uint64_t hi = std::min<std::uint64_t>(n, lo + batch);
        std::uint64_t local = 0;
        double c[3] = {0, 0, 0};
        for (std::uint64_t i = lo; i < hi; ++i) {
            for (std::size_t d = 0; d < dims; ++d)
                c[d] = lanes[d].uniform(i, box[d].lo, box[d].hi);
            if (pred(region.element_from_coords(c))) ++local;
        }
        batch_hits[b] = local;
    });
    HitCounter out;
    out.total = n;
    for (auto h : batch_hits) out.hits += h;
    return out;
}

inline double box_volume(const std::vector<Interval>& box) {
    double v = 1.0;
    for (const auto& iv : box) v *= iv.length();
    return v;
}

}  // namespace detail

/// Haar measure of (region g) DELTA region, the control quantity of the
/// averaging contraction bound.
///
/// The exact path is the closed-form overlap of two shifted boxes and is
/// only available for pure translations. Monte Carlo samples the smallest
/// parameter box containing both cosets; membership in (region g) is tested
/// as h g^{-1} in region. The estimate is unbiased with a binomial standard
/// error.
inline SymdiffEstimate symdiff_measure(const PoolingRegion& region, const GroupElement& g,
                                       SymdiffMethod method,
                                       const MonteCarloSpec& mc = MonteCarloSpec{}) {
    detail::require_same_group(region.group(), g.group(), "symdiff_measure");
    if (g.is_identity()) return {0.0, 0.0};

    if (method == SymdiffMethod::exact) {
        if (region.group() != GroupId::translations)
            throw UnsupportedMethod("symdiff_measure: exact method requires the translation group");
        const Interval* bx = region.axis(AxisKind::trans_x);
        const Interval* by = region.axis(AxisKind::trans_y);
        double area = bx->length() * by->length();
        double ox = std::max(0.0, bx->length() - std::abs(g.tx()));
        double oy = std::max(0.0, by->length() - std::abs(g.ty()));
        return {2.0 * (area - ox * oy), 0.0};
    }

    if (mc.sample_count < 10'000)
        throw InvalidArgument("symdiff_measure: Monte Carlo needs at least 1e4 samples");

    // bounding box of region U (region g), clamping angle axes to one turn
    std::vector<Interval> box;
    auto coset = detail::coset_param_box(region, g);
    std::size_t i = 0;
    for (const auto& a : region.axes()) {
        Interval h = a.interval.hull(coset[i++]);
        if (a.kind == AxisKind::angle && h.length() > 2.0 * kPi) h.hi = h.lo + 2.0 * kPi;
        box.push_back(h);
    }

    GroupElement g_inv = inverse(g);
    auto counts = detail::mc_count(region, box, mc, [&](const GroupElement& h) {
        bool in_region = region_contains(region, h);
        bool in_coset = region_contains(region, compose(h, g_inv));
        return in_region != in_coset;
    });
    double vol = detail::box_volume(box);
    double p = static_cast<double>(counts.hits) / static_cast<double>(counts.total);
    double se = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(counts.total));
    return {vol * p, se};
}

/// Monte Carlo estimate of the Haar measure of the right coset (region g);
/// for a unimodular group this must agree with the measure of the region.
inline SymdiffEstimate coset_measure(const PoolingRegion& region, const GroupElement& g,
                                     const MonteCarloSpec& mc = MonteCarloSpec{}) {
    detail::require_same_group(region.group(), g.group(), "coset_measure");
    if (mc.sample_count < 10'000)
        throw InvalidArgument("coset_measure: Monte Carlo needs at least 1e4 samples");
    auto box = detail::coset_param_box(region, g);
    for (std::size_t i = 0; i < box.size(); ++i) {
        if (region.axes()[i].kind == AxisKind::angle && box[i].length() > 2.0 * kPi)
            box[i].hi = box[i].lo + 2.0 * kPi;
    }
    GroupElement g_inv = inverse(g);
    auto counts = detail::mc_count(region, box, mc, [&](const GroupElement& h) {
        return region_contains(region, compose(h, g_inv));
    });
    double vol = detail::box_volume(box);
    double p = static_cast<double>(counts.hits) / static_cast<double>(counts.total);
    double se = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(counts.total));
    return {vol * p, se};
}

enum class RateMethod { closed_form, slope_fit };

struct RateEstimate {
    double value = 0.0;
    double fit_residual = 0.0;  // zero for closed forms
};

/// d/ds at s = 0 of mu((region exp(s xi)) DELTA region) / mu(region).
///
/// Closed forms cover the box cases where a one-parameter flow shifts the
/// box uniformly: any generator on the translation group, pure-translation
/// and pure-rotation generators on se2 boxes, pure-shear generators on
/// shear boxes. The slope fit evaluates the normalized symmetric difference
/// at s0, s0/2, s0/4, s0/8 and fits a line through the origin by least
/// squares, reporting the relative fit residual.
inline RateEstimate symdiff_rate(const PoolingRegion& region, const LieAlgebraElement& xi,
                                 RateMethod method, const MonteCarloSpec& mc = MonteCarloSpec{},
                                 double s0 = 0.02) {
    detail::require_same_group(region.group(), xi.group(), "symdiff_rate");
    if (xi.is_zero()) return {0.0, 0.0};

    if (method == RateMethod::closed_form) {
        const Interval* bx = region.axis(AxisKind::trans_x);
        const Interval* by = region.axis(AxisKind::trans_y);
        const Interval* bt = region.axis(AxisKind::angle);
        const Interval* bs = region.axis(AxisKind::shear);
        switch (region.group()) {
            case GroupId::translations:
                return {2.0 * (std::abs(xi.vx()) / bx->length() + std::abs(xi.vy()) / by->length()),
                        0.0};
            case GroupId::rotations:
                return {2.0 * std::abs(xi.zeta()) / bt->length(), 0.0};
            case GroupId::se2:
                if (xi.zeta() == 0.0)
                    return {2.0 * (std::abs(xi.vx()) / bx->length() +
                                   std::abs(xi.vy()) / by->length()),
                            0.0};
                if (xi.vx() == 0.0 && xi.vy() == 0.0)
                    return {2.0 * std::abs(xi.zeta()) / bt->length(), 0.0};
                throw UnsupportedMethod(
                    "symdiff_rate: closed form needs a pure-translation or pure-rotation "
                    "generator on se2");
            case GroupId::shear:
                if (xi.vx() == 0.0 && xi.vy() == 0.0)
                    return {2.0 * std::abs(xi.shear_rate()) / bs->length(), 0.0};
                if (xi.shear_rate() == 0.0 && xi.vy() == 0.0)
                    return {2.0 * std::abs(xi.vx()) / bx->length(), 0.0};
                throw UnsupportedMethod(
                    "symdiff_rate: closed form needs a pure-shear or x-translation generator "
                    "on the shear group");
        }
        throw InvalidArgument("symdiff_rate: unknown group");
    }

    double mu = haar_measure(region);
    if (mu <= 0.0) throw DegenerateInput("symdiff_rate: region has zero Haar measure");
    SymdiffMethod inner =
        region.group() == GroupId::translations ? SymdiffMethod::exact : SymdiffMethod::monte_carlo;
    double ss[4] = {s0, s0 / 2.0, s0 / 4.0, s0 / 8.0};
    double num = 0.0, den = 0.0;
    double f[4];
    for (int i = 0; i < 4; ++i) {
        MonteCarloSpec point_mc = mc;
        point_mc.seed = CounterRng(mc.seed, 7000 + static_cast<std::uint64_t>(i)).key();
        f[i] = symdiff_measure(region, exponential(xi, ss[i]), inner, point_mc).value / mu;
        num += ss[i] * f[i];
        den += ss[i] * ss[i];
    }
    double slope = num / den;
    double res2 = 0.0, fit2 = 0.0;
    for (int i = 0; i < 4; ++i) {
        double fit = slope * ss[i];
        res2 += (f[i] - fit) * (f[i] - fit);
        fit2 += fit * fit;
    }
    double residual = fit2 > 0.0 ? std::sqrt(res2 / fit2) : 0.0;
    return {slope, residual};
}

}  // namespace orbitpool
