#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>

#include "orbitpool/image.hpp"
#include "support/oracles.hpp"

using namespace orbitpool;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const double kSqrtPi = std::sqrt(kPi);

ImageSpec gaussian_spec(double sigma, double cx = 0.0, double cy = 0.0) {
    ImageSpec s;
    s.kind = ImageSpec::Kind::gaussian;
    s.sigma_x = s.sigma_y = sigma;
    s.center_x = cx;
    s.center_y = cy;
    return s;
}

}  // namespace

TEST_CASE("synthesize: centered gaussian has the analytic L2 norm") {
    // ||exp(-|x|^2 / 2 sigma^2)||_2^2 = integral exp(-|x|^2/sigma^2) = pi sigma^2
    ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, 512);
    CHECK_THAT(norm2(f), WithinAbs(kSqrtPi, 1e-3));
}

TEST_CASE("synthesize: zero amplitude, determinism, margin and resolution errors") {
    ImageSpec zero = gaussian_spec(1.0);
    zero.amplitude = 0.0;
    CHECK(norm2(synthesize(zero, 6.0, 64)) == 0.0);

    ImageSpec noise;
    noise.kind = ImageSpec::Kind::bandlimited_noise;
    noise.sigma_x = noise.sigma_y = 1.5;
    noise.frequency = 0.5;
    noise.seed = 42;
    ImageGrid a = synthesize(noise, 6.0, 128);
    ImageGrid b = synthesize(noise, 6.0, 128);
    CHECK(a.values() == b.values());  // bitwise identical

    // support reaches the boundary when sigma is too wide for the margin
    ImageSpec wide = gaussian_spec(3.0);
    CHECK_THROWS_AS(synthesize(wide, 6.0, 128, 2.0), DegenerateInput);
    CHECK_THROWS_MATCHES(synthesize(wide, 6.0, 128, 2.0), DegenerateInput,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("margin")));
    CHECK_THROWS_AS(synthesize(gaussian_spec(1.0), 6.0, 8), DegenerateInput);
}

TEST_CASE("inner: bilinearity basics and the two-gaussian oracle") {
    ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, 512);
    ImageGrid zero(6.0, 512);
    CHECK(inner(f, zero) == 0.0);
    CHECK_THAT(norm2(scaled(f, 2.0)), WithinRel(2.0 * norm2(f), 1e-12));

    // <g_0, g_d> = pi sigma^2 exp(-d^2 / 4 sigma^2)
    ImageGrid g = synthesize(gaussian_spec(1.0, 1.0, -std::sqrt(3.0)), 6.0, 512);
    CHECK_THAT(inner(f, g), WithinAbs(kPi * std::exp(-1.0), 1e-3));

    ImageGrid small(3.0, 64);
    CHECK_THROWS_AS(inner(f, small), InvalidArgument);
}

TEST_CASE("act: identity is exact") {
    ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, 256);
    for (auto id : oracles::kAllGroups) {
        ImageGrid g = act(GroupElement::identity(id), f);
        CHECK(g.values() == f.values());
    }
}

TEST_CASE("act: translated gaussian matches the analytic image") {
    ImageGrid f = synthesize(gaussian_spec(0.9), 6.0, 512);
    ImageGrid moved = act(GroupElement::translation(1.0, 0.0), f, Interp::bicubic);
    ImageGrid expected = synthesize(gaussian_spec(0.9, 1.0, 0.0), 6.0, 512);
    CHECK(norm2_diff(moved, expected) <= 1e-3);
    // bilinear is cruder but still within a few times the budget
    ImageGrid moved_bl = act(GroupElement::translation(1.0, 0.0), f, Interp::bilinear);
    CHECK(norm2_diff(moved_bl, expected) <= 5e-3);
}

TEST_CASE("act: rotations preserve the L2 norm") {
    ImageGrid f = synthesize(gaussian_spec(0.8, 1.2, 0.4), 6.0, 512);
    oracles::RandomElements rnd(61);
    double base = norm2(f);
    for (int i = 0; i < 5; ++i) {
        auto g = GroupElement::rotation(rnd.uniform(-kPi, kPi));
        CHECK_THAT(norm2(act(g, f)) / base, WithinAbs(1.0, 1e-3));
    }
}

TEST_CASE("act: margin violations are rejected") {
    // support of this gaussian ends ~5.26 from center; pushing it 2 to the
    // right exceeds the grid
    ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, 256);
    CHECK_THROWS_AS(act(GroupElement::translation(2.0, 0.0), f), DegenerateInput);
    // a centered disc support survives any rotation even though its corner
    // box would not
    ImageGrid wide = synthesize(gaussian_spec(1.05), 6.0, 256);
    REQUIRE(wide.support_radius() > 5.2);
    CHECK_NOTHROW(act(GroupElement::rotation(kPi / 3), wide));
}

TEST_CASE("act: composition consistency within twice the resampling error") {
    ImageGrid f = synthesize(gaussian_spec(0.7, 0.5, -0.3), 6.0, 512);
    // measure the single-resampling error against the analytic translate
    ImageGrid t = act(GroupElement::se2(0, 0.37, 0.21), f);
    ImageGrid t_exact = synthesize(gaussian_spec(0.7, 0.5 + 0.37, -0.3 + 0.21), 6.0, 512);
    double single_err = norm2_diff(t, t_exact);

    oracles::RandomElements rnd(67);
    for (int i = 0; i < 3; ++i) {
        auto g1 = GroupElement::se2(rnd.uniform(-0.3, 0.3), rnd.uniform(-0.4, 0.4),
                                    rnd.uniform(-0.4, 0.4));
        auto g2 = GroupElement::se2(rnd.uniform(-0.3, 0.3), rnd.uniform(-0.4, 0.4),
                                    rnd.uniform(-0.4, 0.4));
        ImageGrid double_resample = act(g1, act(g2, f));
        ImageGrid single = act(compose(g1, g2), f);
        CHECK(norm2_diff(double_resample, single) <= 2.0 * single_err);
    }
}

TEST_CASE("act: isometry of the inner product for rigid motions") {
    ImageGrid f = synthesize(gaussian_spec(0.8, 0.8, 0.0), 6.0, 512);
    ImageGrid h = synthesize(gaussian_spec(0.9, -0.5, 0.4), 6.0, 512);
    double ref = inner(f, h);
    double tol = 1e-3 * norm2(f) * norm2(h);
    for (auto g : {GroupElement::se2(0.7, 0.3, -0.2), GroupElement::se2(-1.1, 0.0, 0.3)}) {
        double moved = inner(act(g, f), act(g, h));
        CHECK_THAT(moved, WithinAbs(ref, tol));
    }
}

TEST_CASE("gradient: exactness on linear ramps and order on gaussians") {
    ImageGrid c(4.0, 64, std::vector<double>(64 * 64, 3.25));
    PlaneVectorField gc = gradient(c);
    CHECK(gc.x.max_abs() == 0.0);
    CHECK(gc.y.max_abs() == 0.0);

    ImageGrid ramp = ImageGrid::build(4.0, 64, [](double x, double) { return x; });
    PlaneVectorField gr = gradient(ramp);
    for (int i = 1; i < 63; ++i)
        for (int j = 1; j < 63; ++j) {
            CHECK_THAT(gr.x.at(i, j), WithinAbs(1.0, 1e-13));
            CHECK_THAT(gr.y.at(i, j), WithinAbs(0.0, 1e-13));
        }

    // halving h divides the max interior error by about four
    auto max_err = [](int n) {
        ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, n);
        PlaneVectorField g = gradient(f);
        double worst = 0.0;
        for (int i = 1; i < n - 1; ++i)
            for (int j = 1; j < n - 1; ++j) {
                double x = f.x_at(j), y = f.y_at(i);
                double fx = -x * std::exp(-(x * x + y * y) / 2.0);
                worst = std::max(worst, std::abs(g.x.at(i, j) - fx));
            }
        return worst;
    };
    double e1 = max_err(128), e2 = max_err(256);
    CHECK(e2 < e1 / 3.0);
    CHECK(e2 < e1 / 4.0 * 1.3);
}

TEST_CASE("generator_field: x-translation generator is -df/dx") {
    ImageGrid f = synthesize(gaussian_spec(1.0, 0.3, -0.2), 6.0, 256);
    ImageGrid gen = generator_field(LieAlgebraElement::translation(1, 0), f);
    // finite-difference flow oracle
    double t = 1e-3;
    ImageGrid flowed = act(GroupElement::translation(t, 0.0), f);
    ImageGrid fd = linear_combination(1.0 / t, flowed, -1.0 / t, f);
    CHECK(norm2_diff(gen, fd) / norm2(gen) < 2e-3);
}

TEST_CASE("generator_field: rotation generator kills radially symmetric images") {
    // r^2 is radial and quadratic, so the central-difference gradient is
    // exact away from the one-sided boundary rows and the rotation
    // generator cancels to rounding there
    ImageGrid quad = ImageGrid::build(4.0, 128, [](double x, double y) { return x * x + y * y; });
    ImageGrid gen = generator_field(LieAlgebraElement::se2(1.0, 0.0, 0.0), quad);
    double interior_max = 0.0;
    for (int i = 1; i < 127; ++i)
        for (int j = 1; j < 127; ++j)
            interior_max = std::max(interior_max, std::abs(gen.at(i, j)));
    CHECK(interior_max <= 1e-12 * quad.max_abs());

    // on a radial gaussian the residual is the h^2/6 third-derivative term
    // of the stencil; at n = 512 that floor is about 5e-5
    ImageGrid f = synthesize(gaussian_spec(1.0), 6.0, 512);
    ImageGrid gf = generator_field(LieAlgebraElement::se2(1.0, 0.0, 0.0), f);
    CHECK(gf.max_abs() <= 1e-4 * f.max_abs());
}

TEST_CASE("generator_field: linear in xi") {
    ImageGrid f = synthesize(gaussian_spec(0.9, 0.4, 0.1), 6.0, 128);
    auto a = LieAlgebraElement::se2(0.7, -0.2, 0.5);
    auto b = LieAlgebraElement::se2(-0.3, 0.8, 0.1);
    auto sum = LieAlgebraElement::se2(a.zeta() + 2 * b.zeta(), a.vx() + 2 * b.vx(),
                                      a.vy() + 2 * b.vy());
    ImageGrid lhs = generator_field(sum, f);
    ImageGrid rhs = linear_combination(1.0, generator_field(a, f), 2.0, generator_field(b, f));
    CHECK(norm2_diff(lhs, rhs) <= 1e-12 * norm2(lhs));
}

TEST_CASE("generator_field: flow consistency at rate O(t)") {
    ImageGrid f = synthesize(gaussian_spec(1.0, 0.5, 0.0), 6.0, 512);
    auto xi = LieAlgebraElement::se2(0.4, 0.6, -0.2);
    ImageGrid gen = generator_field(xi, f);
    double base = norm2(gen);
    double errs[2];
    int k = 0;
    for (double t : {1e-2, 1e-3}) {
        ImageGrid fd = linear_combination(1.0 / t, act(exponential(xi, t), f), -1.0 / t, f);
        errs[k++] = norm2_diff(fd, gen) / base;
    }
    CHECK(errs[1] < errs[0]);       // error decreases with t
    CHECK(errs[0] < 0.05);          // already small at t = 1e-2
    CHECK(errs[1] < errs[0] / 3.0); // roughly first order until grid error bites
}

TEST_CASE("generator_field: BCH flow commutator matches the bracket generator") {
    ImageGrid f = synthesize(gaussian_spec(1.0, 0.6, -0.4), 6.0, 512);
    auto xi = LieAlgebraElement::se2(0.8, 0.0, 0.0);
    auto eta = LieAlgebraElement::se2(0.0, 1.0, 0.0);
    ImageGrid expected = generator_field(bracket(xi, eta), f);
    double t = 0.02;
    auto c = compose(compose(exponential(xi, t), exponential(eta, t)),
                     compose(exponential(xi, -t), exponential(eta, -t)));
    ImageGrid fd = linear_combination(1.0 / (t * t), act(c, f), -1.0 / (t * t), f);
    CHECK(norm2_diff(fd, expected) / norm2(expected) < 0.05);
}

TEST_CASE("grid file round trip is lossless") {
    ImageSpec noise;
    noise.kind = ImageSpec::Kind::bandlimited_noise;
    noise.sigma_x = noise.sigma_y = 1.2;
    noise.frequency = 0.6;
    noise.seed = 7;
    ImageGrid f = synthesize(noise, 5.0, 96);
    auto path = std::filesystem::temp_directory_path() / "orbitpool_grid_test.opg";
    write_grid_file(path.string(), f);
    ImageGrid g = read_grid_file(path.string());
    CHECK(g.resolution() == f.resolution());
    CHECK(g.half_width() == f.half_width());
    CHECK(g.values() == f.values());
    std::filesystem::remove(path);

    auto csv = std::filesystem::temp_directory_path() / "orbitpool_grid_test.csv";
    write_grid_csv(csv.string(), f);
    CHECK(std::filesystem::file_size(csv) > 0);
    std::filesystem::remove(csv);
}

TEST_CASE("grid file header layout is pinned") {
    ImageGrid f(1.5, 16);
    auto path = std::filesystem::temp_directory_path() / "orbitpool_hdr.opg";
    write_grid_file(path.string(), f);
    std::ifstream in(path, std::ios::binary);
    unsigned char hdr[20];
    in.read(reinterpret_cast<char*>(hdr), 20);
    REQUIRE(in.gcount() == 20);
    CHECK(std::memcmp(hdr, "OPGRID1\0", 8) == 0);
    // u32 resolution, little endian
    std::uint32_t n = hdr[8] | (hdr[9] << 8) | (hdr[10] << 16) | (hdr[11] << 24);
    CHECK(n == 16);
    // f64 half-width, little endian
    double L;
    std::memcpy(&L, hdr + 12, 8);
    CHECK(L == 1.5);
    CHECK(std::filesystem::file_size(path) == 20 + 16 * 16 * 8);
    std::filesystem::remove(path);
}

TEST_CASE("grid file rejects corrupt input") {
    auto path = std::filesystem::temp_directory_path() / "orbitpool_bad.opg";
    {
        std::ofstream out(path, std::ios::binary);
        out << "NOTAGRID00000000";
    }
    CHECK_THROWS_AS(read_grid_file(path.string()), InvalidArgument);
    std::filesystem::remove(path);
}

TEST_CASE("images reject non-finite samples") {
    std::vector<double> v(16 * 16, 0.0);
    v[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(ImageGrid(2.0, 16, std::move(v)), InvalidArgument);
}
