#pragma once

#include <vector>

#include "orbitpool/image.hpp"
#include "orbitpool/parallel.hpp"
#include "orbitpool/region.hpp"

namespace orbitpool {

/// Midpoint product rule over the region's box coordinates. The Haar
/// density is constant there for every supported group, so the nodes carry
/// equal weight. Degenerate (point) axes contribute their single point.
struct QuadratureSpec {
    int angle_nodes = 9;  // the angle (or shear) axis, when the group has one
    int x_nodes = 9;
    int y_nodes = 9;

    int nodes_for(AxisKind kind) const {
        switch (kind) {
            case AxisKind::angle:
            case AxisKind::shear: return angle_nodes;
            case AxisKind::trans_x: return x_nodes;
            case AxisKind::trans_y: return y_nodes;
        }
        return 1;
    }
};

/// The quadrature nodes of a region as group elements, axis 0 slowest.
inline std::vector<GroupElement> quadrature_nodes(const PoolingRegion& region,
                                                  const QuadratureSpec& quad) {
    std::vector<std::vector<double>> axis_nodes;
    for (const auto& a : region.axes()) {
        std::vector<double> nodes;
        if (a.interval.degenerate()) {
            nodes.push_back(a.interval.lo);
        } else {
            int n = quad.nodes_for(a.kind);
            if (n < 1) throw InvalidArgument("quadrature_nodes: node count must be positive");
            double len = a.interval.length();
            for (int k = 0; k < n; ++k)
                nodes.push_back(a.interval.lo + (k + 0.5) * len / n);
        }
        axis_nodes.push_back(std::move(nodes));
    }

    std::vector<GroupElement> out;
    std::size_t total = 1;
    for (const auto& v : axis_nodes) total *= v.size();
    out.reserve(total);
    std::array<std::size_t, 3> idx = {0, 0, 0};
    std::size_t dims = axis_nodes.size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        double c[3] = {0, 0, 0};
        std::size_t rem = flat;
        for (std::size_t d = dims; d-- > 0;) {
            idx[d] = rem % axis_nodes[d].size();
            rem /= axis_nodes[d].size();
        }
        for (std::size_t d = 0; d < dims; ++d) c[d] = axis_nodes[d][idx[d]];
        out.push_back(region.element_from_coords(c));
    }
    return out;
}

/// The averaging operator: the equal-weight midpoint average of L_g f over
/// the region. Node images are accumulated with a pairwise tree, so the
/// result is bit-reproducible for any thread count.
inline ImageGrid pool(const ImageGrid& f, const PoolingRegion& region, const QuadratureSpec& quad,
                      Interp interp = Interp::bicubic) {
    auto nodes = quadrature_nodes(region, quad);
    for (const auto& g : nodes) require_action_margin(g, f, "pool");

    PairwiseAccumulator<std::vector<double>, void (*)(std::vector<double>&,
                                                      const std::vector<double>&)>
        acc(+[](std::vector<double>& lhs, const std::vector<double>& rhs) {
            for (std::size_t i = 0; i < lhs.size(); ++i) lhs[i] += rhs[i];
        });

    std::vector<double> buf;
    for (const auto& g : nodes) {
        detail::act_into(g, f, interp, buf);
        acc.push(buf);  // copies; the accumulator owns its partials
    }
    std::vector<double> sum = acc.finish();
    double w = 1.0 / static_cast<double>(nodes.size());
    for (double& v : sum) v *= w;
    return ImageGrid(f.half_width(), f.resolution(), std::move(sum));
}

/// The pooled generator field: the region average of X_xi(f), which by the
/// commutation of averaging with the flow derivative equals the field that
/// X_xi induces on the pooled orbit at the pooled image.
inline ImageGrid pooled_generator_field(const LieAlgebraElement& xi, const ImageGrid& f,
                                        const PoolingRegion& region, const QuadratureSpec& quad,
                                        Interp interp = Interp::bicubic) {
    detail::require_same_group(region.group(), xi.group(), "pooled_generator_field");
    if (xi.is_zero()) return ImageGrid(f.half_width(), f.resolution());
    return pool(generator_field(xi, f), region, quad, interp);
}

}  // namespace orbitpool
