#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "orbitpool/errors.hpp"
#include "orbitpool/group.hpp"
#include "orbitpool/parallel.hpp"
#include "orbitpool/rng.hpp"

namespace orbitpool {

/// A real-valued function sampled on the uniform grid covering
/// [-half_width, half_width]^2 with resolution n per axis. Sample (i, j)
/// sits at (x_j, y_i) = (-L + j h, -L + i h), h = 2L/(n-1), stored row
/// major. Values are immutable after construction; support statistics
/// (needed by the group-action margin checks) are computed up front.
class ImageGrid {
public:
    ImageGrid(double half_width, int resolution)
        : ImageGrid(half_width, resolution,
                    std::vector<double>(static_cast<std::size_t>(resolution) * resolution, 0.0)) {}

    ImageGrid(double half_width, int resolution, std::vector<double> values)
        : half_width_(half_width), n_(resolution), values_(std::move(values)) {
        if (n_ < 2) throw InvalidArgument("ImageGrid: resolution must be at least 2");
        if (!(half_width_ > 0.0)) throw InvalidArgument("ImageGrid: half_width must be positive");
        if (values_.size() != static_cast<std::size_t>(n_) * n_)
            throw InvalidArgument("ImageGrid: value count does not match resolution");
        compute_support_stats();
    }

    /// Builds an image by evaluating fn(x, y) at every grid node.
    template <typename Fn>
    static ImageGrid build(double half_width, int resolution, Fn&& fn) {
        std::vector<double> v(static_cast<std::size_t>(resolution) * resolution);
        double h = 2.0 * half_width / (resolution - 1);
        parallel_for(static_cast<std::size_t>(resolution), [&](std::size_t i) {
            double y = -half_width + static_cast<double>(i) * h;
            double* row = v.data() + i * resolution;
            for (int j = 0; j < resolution; ++j)
                row[j] = fn(-half_width + j * h, y);
        });
        return ImageGrid(half_width, resolution, std::move(v));
    }

    int resolution() const { return n_; }
    double half_width() const { return half_width_; }
    double spacing() const { return 2.0 * half_width_ / (n_ - 1); }
    double x_at(int j) const { return -half_width_ + j * spacing(); }
    double y_at(int i) const { return -half_width_ + i * spacing(); }

    double at(int i, int j) const { return values_[static_cast<std::size_t>(i) * n_ + j]; }
    const std::vector<double>& values() const { return values_; }
    const double* row(int i) const { return values_.data() + static_cast<std::size_t>(i) * n_; }

    bool same_geometry(const ImageGrid& other) const {
        return n_ == other.n_ && half_width_ == other.half_width_;
    }

    double max_abs() const { return max_abs_; }

    /// Half-width of the smallest centered box containing every sample with
    /// |f| >= 1e-6 max|f| (zero for the zero image).
    double support_box_halfwidth() const { return support_box_halfwidth_; }

    /// Radius of the smallest centered disc containing those samples.
    double support_radius() const { return support_radius_; }

    /// True when all samples within distance m of the grid boundary are
    /// below the 1e-6 max|f| support threshold.
    bool margin_valid(double m) const { return support_box_halfwidth_ <= half_width_ - m; }

private:
    void compute_support_stats() {
        double mx = 0.0;
        for (double v : values_) {
            if (!std::isfinite(v)) throw InvalidArgument("ImageGrid: non-finite sample");
            mx = std::max(mx, std::abs(v));
        }
        max_abs_ = mx;
        support_box_halfwidth_ = 0.0;
        support_radius_ = 0.0;
        if (mx == 0.0) return;
        double thresh = 1e-6 * mx;
        double h = spacing();
        double box = 0.0, rad2 = 0.0;
        for (int i = 0; i < n_; ++i) {
            double y = -half_width_ + i * h;
            const double* r = row(i);
            for (int j = 0; j < n_; ++j) {
                if (std::abs(r[j]) >= thresh) {
                    double x = -half_width_ + j * h;
                    box = std::max({box, std::abs(x), std::abs(y)});
                    rad2 = std::max(rad2, x * x + y * y);
                }
            }
        }
        support_box_halfwidth_ = box;
        support_radius_ = std::sqrt(rad2);
    }

    double half_width_;
    int n_;
    std::vector<double> values_;
    double max_abs_ = 0.0;
    double support_box_halfwidth_ = 0.0;
    double support_radius_ = 0.0;
};

namespace detail {

inline void require_same_geometry(const ImageGrid& a, const ImageGrid& b, const char* op) {
    if (!a.same_geometry(b))
        throw InvalidArgument(std::string(op) + ": grid geometry mismatch");
}

}  // namespace detail

/// L2 inner product with quadrature weight h^2. Row sums are combined
/// pairwise so the result is reproducible and accurate.
inline double inner(const ImageGrid& f, const ImageGrid& g) {
    detail::require_same_geometry(f, g, "inner");
    int n = f.resolution();
    std::vector<double> rows(n);
    for (int i = 0; i < n; ++i) {
        const double* a = f.row(i);
        const double* b = g.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) s += a[j] * b[j];
        rows[i] = s;
    }
    double h = f.spacing();
    return h * h * pairwise_sum(rows.begin(), rows.end());
}

inline double norm2(const ImageGrid& f) { return std::sqrt(inner(f, f)); }

/// ||f - g||_2 without materializing the difference image.
inline double norm2_diff(const ImageGrid& f, const ImageGrid& g) {
    detail::require_same_geometry(f, g, "norm2_diff");
    int n = f.resolution();
    std::vector<double> rows(n);
    for (int i = 0; i < n; ++i) {
        const double* a = f.row(i);
        const double* b = g.row(i);
        double s = 0.0;
        for (int j = 0; j < n; ++j) {
            double d = a[j] - b[j];
            s += d * d;
        }
        rows[i] = s;
    }
    double h = f.spacing();
    return std::sqrt(h * h * pairwise_sum(rows.begin(), rows.end()));
}

inline ImageGrid scaled(const ImageGrid& f, double c) {
    std::vector<double> v = f.values();
    for (double& x : v) x *= c;
    return ImageGrid(f.half_width(), f.resolution(), std::move(v));
}

inline ImageGrid linear_combination(double a, const ImageGrid& f, double b, const ImageGrid& g) {
    detail::require_same_geometry(f, g, "linear_combination");
    std::vector<double> v(f.values().size());
    const auto& fv = f.values();
    const auto& gv = g.values();
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a * fv[i] + b * gv[i];
    return ImageGrid(f.half_width(), f.resolution(), std::move(v));
}

enum class Interp { bilinear, bicubic };

inline const char* interp_name(Interp interp) {
    return interp == Interp::bilinear ? "bilinear" : "bicubic";
}

namespace detail {

// Catmull-Rom cubic through p0..p3 evaluated at t in [0,1] between p1, p2.
inline double cubic(double p0, double p1, double p2, double p3, double t) {
    return p1 + 0.5 * t *
                    (p2 - p0 +
                     t * (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3 + t * (3.0 * (p1 - p2) + p3 - p0)));
}

// Samples f at fractional grid coordinates (u along x, v along y); reads
// outside the grid are zero, matching compactly supported images.
inline double sample_bilinear(const ImageGrid& f, double u, double v) {
    int n = f.resolution();
    double fu = std::floor(u), fv = std::floor(v);
    int j = static_cast<int>(fu), i = static_cast<int>(fv);
    if (j < -1 || j > n - 1 || i < -1 || i > n - 1) return 0.0;
    double a = u - fu, b = v - fv;
    auto val = [&](int ii, int jj) -> double {
        if (ii < 0 || ii >= n || jj < 0 || jj >= n) return 0.0;
        return f.at(ii, jj);
    };
    return (1 - a) * (1 - b) * val(i, j) + a * (1 - b) * val(i, j + 1) +
           (1 - a) * b * val(i + 1, j) + a * b * val(i + 1, j + 1);
}

inline double sample_bicubic(const ImageGrid& f, double u, double v) {
    int n = f.resolution();
    double fu = std::floor(u), fv = std::floor(v);
    int j = static_cast<int>(fu), i = static_cast<int>(fv);
    if (j < -2 || j > n || i < -2 || i > n) return 0.0;
    double a = u - fu, b = v - fv;
    double col[4];
    if (i >= 1 && i <= n - 3 && j >= 1 && j <= n - 3) {
        for (int r = 0; r < 4; ++r) {
            const double* p = f.row(i - 1 + r) + (j - 1);
            col[r] = cubic(p[0], p[1], p[2], p[3], a);
        }
    } else {
        auto val = [&](int ii, int jj) -> double {
            if (ii < 0 || ii >= n || jj < 0 || jj >= n) return 0.0;
            return f.at(ii, jj);
        };
        for (int r = 0; r < 4; ++r) {
            int ii = i - 1 + r;
            col[r] = cubic(val(ii, j - 1), val(ii, j), val(ii, j + 1), val(ii, j + 2), a);
        }
    }
    return cubic(col[0], col[1], col[2], col[3], b);
}

}  // namespace detail

/// Verifies that the support of f, transported by g, stays inside the grid,
/// so the resampled image loses no mass at the boundary. The support is
/// bracketed both by a centered box and by a centered disc; the action must
/// keep at least one of them inside.
inline void require_action_margin(const GroupElement& g, const ImageGrid& f, const char* op) {
    if (f.max_abs() == 0.0) return;
    double limit = f.half_width();
    double b = f.support_box_halfwidth();
    Eigen::Matrix2d m = g.linear();
    Eigen::Vector2d t = g.translation_part();

    bool box_ok = true;
    for (double cx : {-b, b}) {
        for (double cy : {-b, b}) {
            Eigen::Vector2d p = m * Eigen::Vector2d(cx, cy) + t;
            if (std::abs(p.x()) > limit || std::abs(p.y()) > limit) box_ok = false;
        }
    }
    if (box_ok) return;

    double r = f.support_radius();
    double ex = std::abs(t.x()) + r * m.row(0).norm();
    double ey = std::abs(t.y()) + r * m.row(1).norm();
    if (ex <= limit && ey <= limit) return;

    char msg[256];
    std::snprintf(msg, sizeof msg,
                  "%s: support margin violated (support box %.3f, radius %.3f would leave the "
                  "[-%.3f, %.3f]^2 grid under the requested transform)",
                  op, b, r, limit, limit);
    throw DegenerateInput(msg);
}

namespace detail {

// Pure translation: the fractional offset is constant across the grid, so
// the interpolation weights are computed once and the inner loop reduces to
// shifted fused multiply-adds.
inline void act_translation_rows(const ImageGrid& f, double du, double dv, Interp interp,
                                 std::vector<double>& out) {
    int n = f.resolution();
    double fu = std::floor(du), fv = std::floor(dv);
    double a = du - fu, b = dv - fv;
    int joff = static_cast<int>(fu), ioff = static_cast<int>(fv);

    double wx[4], wy[4];
    int taps;
    if (interp == Interp::bicubic) {
        taps = 4;
        auto weights = [](double t, double* w) {
            // Catmull-Rom expanded in the four taps
            w[0] = 0.5 * t * (-1.0 + t * (2.0 - t));
            w[1] = 1.0 + t * t * (-2.5 + 1.5 * t);
            w[2] = 0.5 * t * (1.0 + t * (4.0 - 3.0 * t));
            w[3] = 0.5 * t * t * (t - 1.0);
        };
        weights(a, wx);
        weights(b, wy);
        --joff;
        --ioff;
    } else {
        taps = 2;
        wx[0] = 1.0 - a;
        wx[1] = a;
        wy[0] = 1.0 - b;
        wy[1] = b;
    }

    int jlo = std::max(0, -joff);               // first j with all taps in range
    int jhi = std::min(n, n - taps + 1 - joff); // one past the last such j

    parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
        int i = static_cast<int>(iu);
        double* dst = out.data() + iu * n;
        const double* src[4];
        for (int r = 0; r < taps; ++r) {
            int si = i + ioff + r;
            src[r] = (si >= 0 && si < n) ? f.row(si) : nullptr;
        }
        auto tap = [&](int j) {
            double v = 0.0;
            for (int r = 0; r < taps; ++r) {
                if (!src[r]) continue;
                double s = 0.0;
                for (int c = 0; c < taps; ++c) {
                    int sj = j + joff + c;
                    if (sj >= 0 && sj < n) s += wx[c] * src[r][sj];
                }
                v += wy[r] * s;
            }
            return v;
        };
        for (int j = 0; j < std::min(jlo, n); ++j) dst[j] = tap(j);
        if (taps == 4 && src[0] && src[1] && src[2] && src[3]) {
            for (int j = jlo; j < jhi; ++j) {
                const int s0 = j + joff;
                double v = 0.0;
                for (int r = 0; r < 4; ++r) {
                    const double* p = src[r] + s0;
                    v += wy[r] * (wx[0] * p[0] + wx[1] * p[1] + wx[2] * p[2] + wx[3] * p[3]);
                }
                dst[j] = v;
            }
        } else if (taps == 2 && src[0] && src[1]) {
            for (int j = jlo; j < jhi; ++j) {
                const int s0 = j + joff;
                dst[j] = wy[0] * (wx[0] * src[0][s0] + wx[1] * src[0][s0 + 1]) +
                         wy[1] * (wx[0] * src[1][s0] + wx[1] * src[1][s0 + 1]);
            }
        } else {
            for (int j = jlo; j < jhi; ++j) dst[j] = tap(j);
        }
        for (int j = std::max(jhi, jlo); j < n; ++j) dst[j] = tap(j);
    });
}

// General affine pull-back; source coordinates advance linearly along a row.
inline void act_affine_rows(const ImageGrid& f, const Eigen::Matrix2d& m,
                            const Eigen::Vector2d& t, Interp interp, std::vector<double>& out) {
    int n = f.resolution();
    double L = f.half_width();
    double h = f.spacing();
    double inv_h = 1.0 / h;
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double y = -L + static_cast<double>(i) * h;
        double* dst = out.data() + i * n;
        if (interp == Interp::bicubic) {
            for (int j = 0; j < n; ++j) {
                double x = -L + j * h;
                double u = (m(0, 0) * x + m(0, 1) * y + t.x() + L) * inv_h;
                double v = (m(1, 0) * x + m(1, 1) * y + t.y() + L) * inv_h;
                dst[j] = sample_bicubic(f, u, v);
            }
        } else {
            for (int j = 0; j < n; ++j) {
                double x = -L + j * h;
                double u = (m(0, 0) * x + m(0, 1) * y + t.x() + L) * inv_h;
                double v = (m(1, 0) * x + m(1, 1) * y + t.y() + L) * inv_h;
                dst[j] = sample_bilinear(f, u, v);
            }
        }
    });
}

// Resampling core writing into a caller-provided buffer; used by the
// pooling quadrature to skip per-node image bookkeeping. The margin check
// is the caller's job.
inline void act_into(const GroupElement& g, const ImageGrid& f, Interp interp,
                     std::vector<double>& out) {
    out.resize(f.values().size());
    if (g.is_identity()) {
        std::copy(f.values().begin(), f.values().end(), out.begin());
        return;
    }
    GroupElement gi = inverse(g);
    bool pure_translation = g.group() == GroupId::translations ||
                            (g.group() == GroupId::se2 && g.theta() == 0.0) ||
                            (g.group() == GroupId::shear && g.shear_factor() == 0.0);
    if (pure_translation) {
        double inv_h = 1.0 / f.spacing();
        act_translation_rows(f, gi.tx() * inv_h, gi.ty() * inv_h, interp, out);
    } else {
        act_affine_rows(f, gi.linear(), gi.translation_part(), interp, out);
    }
}

}  // namespace detail

/// The group action (L_g f)(x) = f(g^{-1} x) by resampling. Out-of-grid
/// reads are zero; the support-margin precondition keeps that lossless.
inline ImageGrid act(const GroupElement& g, const ImageGrid& f, Interp interp = Interp::bicubic) {
    require_action_margin(g, f, "act");
    if (g.is_identity()) return f;
    std::vector<double> out;
    detail::act_into(g, f, interp, out);
    return ImageGrid(f.half_width(), f.resolution(), std::move(out));
}

/// Two scalar fields on a shared grid, the x- and y-components of a plane
/// vector field.
struct PlaneVectorField {
    ImageGrid x;
    ImageGrid y;

    PlaneVectorField(ImageGrid x_, ImageGrid y_) : x(std::move(x_)), y(std::move(y_)) {
        detail::require_same_geometry(x, y, "PlaneVectorField");
    }
};

/// Central differences in the interior, one-sided at the boundary.
inline PlaneVectorField gradient(const ImageGrid& f) {
    int n = f.resolution();
    double inv2h = 1.0 / (2.0 * f.spacing());
    double invh = 1.0 / f.spacing();
    std::vector<double> gx(static_cast<std::size_t>(n) * n), gy(gx.size());
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t iu) {
        int i = static_cast<int>(iu);
        const double* r = f.row(i);
        const double* rm = f.row(i > 0 ? i - 1 : 0);
        const double* rp = f.row(i < n - 1 ? i + 1 : n - 1);
        double* ox = gx.data() + iu * n;
        double* oy = gy.data() + iu * n;
        double wy = (i == 0 || i == n - 1) ? invh : inv2h;
        for (int j = 0; j < n; ++j) {
            if (j == 0)
                ox[j] = (r[1] - r[0]) * invh;
            else if (j == n - 1)
                ox[j] = (r[n - 1] - r[n - 2]) * invh;
            else
                ox[j] = (r[j + 1] - r[j - 1]) * inv2h;
            oy[j] = (rp[j] - rm[j]) * wy;
        }
    });
    return {ImageGrid(f.half_width(), n, std::move(gx)),
            ImageGrid(f.half_width(), n, std::move(gy))};
}

/// The infinitesimal generator of the action along xi evaluated on f:
/// X_xi(f)(p) = -<grad f(p), xi p>, the t-derivative at 0 of L_exp(t xi) f.
inline ImageGrid generator_field(const LieAlgebraElement& xi, const ImageGrid& f) {
    PlaneVectorField grad = gradient(f);
    int n = f.resolution();
    double L = f.half_width();
    double h = f.spacing();
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    double zeta = xi.zeta(), vx = xi.vx(), vy = xi.vy(), sig = xi.shear_rate();
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
        double y = -L + static_cast<double>(i) * h;
        const double* gx = grad.x.row(static_cast<int>(i));
        const double* gy = grad.y.row(static_cast<int>(i));
        double* dst = out.data() + i * n;
        for (int j = 0; j < n; ++j) {
            double x = -L + j * h;
            double velx = vx - zeta * y + sig * y;
            double vely = vy + zeta * x;
            dst[j] = -(gx[j] * velx + gy[j] * vely);
        }
    });
    return ImageGrid(L, n, std::move(out));
}

/// Synthetic test-image factory.
struct ImageSpec {
    enum class Kind { gaussian, anisotropic_gaussian, gabor, bandlimited_noise };

    Kind kind = Kind::gaussian;
    double amplitude = 1.0;
    double center_x = 0.0, center_y = 0.0;
    double sigma_x = 1.0, sigma_y = 1.0;  // widths (sigma_x doubles as the isotropic width)
    double orientation = 0.0;             // radians
    double frequency = 0.0;               // carrier (gabor) or band limit (noise), cycles/unit
    double phase = 0.0;
    int mode_count = 24;                  // plane-wave count for band-limited noise
    std::uint64_t seed = 0;
};

inline const char* image_kind_name(ImageSpec::Kind k) {
    switch (k) {
        case ImageSpec::Kind::gaussian: return "gaussian";
        case ImageSpec::Kind::anisotropic_gaussian: return "anisotropic_gaussian";
        case ImageSpec::Kind::gabor: return "gabor";
        case ImageSpec::Kind::bandlimited_noise: return "bandlimited_noise";
    }
    return "?";
}

/// Deterministic synthesis of a test image; rejects images whose support
/// comes within required_margin of the grid boundary.
inline ImageGrid synthesize(const ImageSpec& spec, double half_width, int resolution,
                            double required_margin = 0.0) {
    if (resolution < 16)
        throw DegenerateInput("synthesize: resolution below 16 cannot honor a support margin");

    double ca = std::cos(spec.orientation), sa = std::sin(spec.orientation);
    double sx2 = 2.0 * spec.sigma_x * spec.sigma_x;
    double sy2 = 2.0 * spec.sigma_y * spec.sigma_y;

    // plane-wave bank for band-limited noise, fixed by the seed
    std::vector<double> kx, ky, ph, amp;
    if (spec.kind == ImageSpec::Kind::bandlimited_noise) {
        CounterRng rk(spec.seed, 11), ra(spec.seed, 12), rp(spec.seed, 13), rw(spec.seed, 14);
        double band = spec.frequency > 0.0 ? spec.frequency : 0.5;
        for (int m = 0; m < spec.mode_count; ++m) {
            // wave vectors uniform over the disc of radius `band`
            double angle = rk.uniform(m, 0.0, 2.0 * kPi);
            double radius = band * std::sqrt(ra.uniform(m));
            kx.push_back(2.0 * kPi * radius * std::cos(angle));
            ky.push_back(2.0 * kPi * radius * std::sin(angle));
            ph.push_back(rp.uniform(m, 0.0, 2.0 * kPi));
            amp.push_back(rw.normal(m));
        }
    }

    ImageGrid img = ImageGrid::build(half_width, resolution, [&](double x, double y) {
        double dx = x - spec.center_x, dy = y - spec.center_y;
        switch (spec.kind) {
            case ImageSpec::Kind::gaussian:
                return spec.amplitude * std::exp(-(dx * dx + dy * dy) / sx2);
            case ImageSpec::Kind::anisotropic_gaussian: {
                double u = ca * dx + sa * dy, v = -sa * dx + ca * dy;
                return spec.amplitude * std::exp(-u * u / sx2 - v * v / sy2);
            }
            case ImageSpec::Kind::gabor: {
                double u = ca * dx + sa * dy, v = -sa * dx + ca * dy;
                double env = std::exp(-u * u / sx2 - v * v / sy2);
                return spec.amplitude * env *
                       std::cos(2.0 * kPi * spec.frequency * u + spec.phase);
            }
            case ImageSpec::Kind::bandlimited_noise: {
                double u = ca * dx + sa * dy, v = -sa * dx + ca * dy;
                double env = std::exp(-u * u / sx2 - v * v / sy2);
                double s = 0.0;
                for (std::size_t m = 0; m < kx.size(); ++m)
                    s += amp[m] * std::cos(kx[m] * dx + ky[m] * dy + ph[m]);
                return spec.amplitude * env * s;
            }
        }
        return 0.0;
    });

    if (!img.margin_valid(required_margin)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "synthesize: %s image violates the support margin %.3f "
                      "(support box half-width %.3f of %.3f)",
                      image_kind_name(spec.kind), required_margin, img.support_box_halfwidth(),
                      half_width);
        throw DegenerateInput(msg);
    }
    return img;
}

// --- dense float-array file format ------------------------------------------
//
// Header: magic "OPGRID1\0" (8 bytes), u32 resolution, f64 half_width, all
// little endian, followed by resolution^2 f64 samples in row-major order.

namespace detail {

static_assert(std::endian::native == std::endian::little,
              "grid file I/O assumes a little-endian host");

inline void put_bytes_le(std::string& out, const void* p, std::size_t len) {
    const unsigned char* b = static_cast<const unsigned char*>(p);
    out.append(reinterpret_cast<const char*>(b), len);
}

}  // namespace detail

inline constexpr char kGridMagic[8] = {'O', 'P', 'G', 'R', 'I', 'D', '1', '\0'};

inline void write_grid_file(const std::string& path, const ImageGrid& img) {
    std::string buf;
    buf.reserve(24 + img.values().size() * 8);
    buf.append(kGridMagic, 8);
    std::uint32_t n = static_cast<std::uint32_t>(img.resolution());
    double l = img.half_width();
    detail::put_bytes_le(buf, &n, 4);
    detail::put_bytes_le(buf, &l, 8);
    for (double v : img.values()) detail::put_bytes_le(buf, &v, 8);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("write_grid_file: cannot open " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw Error("write_grid_file: short write to " + path);
}

inline ImageGrid read_grid_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_grid_file: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kGridMagic, 8) != 0)
        throw InvalidArgument("read_grid_file: bad magic in " + path);
    std::uint32_t n = 0;
    double l = 0.0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&l), 8);
    if (!in || n < 2 || n > (1u << 16))
        throw InvalidArgument("read_grid_file: bad header in " + path);
    std::vector<double> v(static_cast<std::size_t>(n) * n);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size() * 8));
    if (!in) throw InvalidArgument("read_grid_file: truncated data in " + path);
    return ImageGrid(l, static_cast<int>(n), std::move(v));
}

/// Plain CSV dump (row per line) for plotting.
inline void write_grid_csv(const std::string& path, const ImageGrid& img) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("write_grid_csv: cannot open " + path);
    int n = img.resolution();
    char num[64];
    for (int i = 0; i < n; ++i) {
        const double* r = img.row(i);
        for (int j = 0; j < n; ++j) {
            std::snprintf(num, sizeof num, "%.17g", r[j]);
            out << num << (j + 1 < n ? "," : "\n");
        }
    }
}

}  // namespace orbitpool
