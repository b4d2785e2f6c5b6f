#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "orbitpool/signature.hpp"
#include "support/oracles.hpp"

using namespace orbitpool;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

ImageGrid make_gaussian(double sigma, double cx, double cy, double L = 6.0, int n = 512) {
    ImageSpec s;
    s.kind = ImageSpec::Kind::gaussian;
    s.sigma_x = s.sigma_y = sigma;
    s.center_x = cx;
    s.center_y = cy;
    return synthesize(s, L, n);
}

PoolingRegion full_circle() {
    return PoolingRegion::degenerate(GroupId::rotations, {Axis{AxisKind::angle, {-kPi, kPi}}});
}

std::vector<Nonlinearity> all_nonlins() {
    return {Nonlinearity::sigmoid(), Nonlinearity::relu(), Nonlinearity::modulus(),
            Nonlinearity::tanh(), Nonlinearity::abs_power(2.0)};
}

}  // namespace

TEST_CASE("draw_templates: unit norms, determinism, near orthogonality") {
    TemplateSet a = draw_templates(4, 6.0, 256, 99);
    REQUIRE(a.size() == 4);
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(std::abs(norm2(a[k]) - 1.0) <= 1e-10);

    TemplateSet b = draw_templates(4, 6.0, 256, 99);
    for (std::size_t k = 0; k < a.size(); ++k)
        CHECK(a[k].values() == b[k].values());

    // high-dimensional random draws are nearly orthogonal
    TemplateSet big = draw_templates(8, 6.0, 256, 7);
    double worst = 0.0;
    for (std::size_t i = 0; i < big.size(); ++i)
        for (std::size_t j = i + 1; j < big.size(); ++j)
            worst = std::max(worst, std::abs(inner(big[i], big[j])));
    CHECK(worst < 0.5);

    CHECK_THROWS_AS(draw_templates(0, 6.0, 128, 1), InvalidArgument);
}

TEST_CASE("nonlinearities: evaluation and parsing") {
    CHECK(Nonlinearity::relu()(-2.0) == 0.0);
    CHECK(Nonlinearity::relu()(3.0) == 3.0);
    CHECK(Nonlinearity::modulus()(-2.5) == 2.5);
    CHECK_THAT(Nonlinearity::sigmoid()(0.0), WithinAbs(0.5, 1e-15));
    CHECK_THAT(Nonlinearity::abs_power(2.0)(-3.0), WithinAbs(9.0, 1e-13));
    CHECK(Nonlinearity::parse("abs_power:2").power() == 2.0);
    CHECK(Nonlinearity::parse("tanh").name() == "tanh");
    CHECK_THROWS_AS(Nonlinearity::parse("softmax"), InvalidArgument);
    CHECK_THROWS_AS(Nonlinearity::abs_power(0.5), InvalidArgument);
}

TEST_CASE("signature: zero image with modulus gives the zero signature") {
    ImageGrid zero(6.0, 128);
    TemplateSet t = draw_templates(3, 6.0, 128, 5);
    auto sig = signature(zero, t, {Nonlinearity::modulus()}, full_circle(),
                         QuadratureSpec{8, 1, 1});
    for (std::size_t k = 0; k < 3; ++k) CHECK(sig.at(k, 0) == 0.0);
}

TEST_CASE("signature: sqrt(node_count * h_k) is the L2-pooled channel response") {
    ImageGrid f = make_gaussian(0.8, 1.0, 0.0, 6.0, 256);
    TemplateSet t = draw_templates(3, 6.0, 256, 21);
    auto region = full_circle();
    QuadratureSpec quad{16, 1, 1};
    auto sig = signature(f, t, {Nonlinearity::abs_power(2.0)}, region, quad);
    auto responses = template_responses(f, t, region, quad);
    double node_count = static_cast<double>(responses[0].size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        double l2_pooled = 0.0;
        for (double q : responses[k]) l2_pooled += q * q;
        l2_pooled = std::sqrt(l2_pooled);
        double from_sig = std::sqrt(node_count * sig.at(k, 0));
        CHECK_THAT(from_sig, WithinRel(l2_pooled, 1e-10));
    }
}

TEST_CASE("signature: abs_power entries ignore template sign flips") {
    ImageGrid f = make_gaussian(0.8, 0.9, 0.2, 6.0, 256);
    TemplateSet t = draw_templates(2, 6.0, 256, 31);
    TemplateSet flipped = t;
    for (auto& img : flipped.templates) img = scaled(img, -1.0);
    auto region = full_circle();
    QuadratureSpec quad{12, 1, 1};
    auto a = signature(f, t, {Nonlinearity::abs_power(2.0)}, region, quad);
    auto b = signature(f, flipped, {Nonlinearity::abs_power(2.0)}, region, quad);
    for (std::size_t k = 0; k < 2; ++k) CHECK(a.at(k, 0) == b.at(k, 0));
}

TEST_CASE("signature: upscaling the image never shrinks abs_power entries") {
    ImageGrid f = make_gaussian(0.7, 0.8, -0.4, 6.0, 256);
    TemplateSet t = draw_templates(3, 6.0, 256, 41);
    auto region = full_circle();
    QuadratureSpec quad{12, 1, 1};
    auto base = signature(f, t, {Nonlinearity::abs_power(2.0), Nonlinearity::abs_power(3.0)},
                          region, quad);
    auto up = signature(scaled(f, 1.7), t,
                        {Nonlinearity::abs_power(2.0), Nonlinearity::abs_power(3.0)}, region,
                        quad);
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t n = 0; n < 2; ++n) CHECK(up.at(k, n) >= base.at(k, n));
}

TEST_CASE("invariance_error: identity displacement, full-circle rotations") {
    ImageGrid f = make_gaussian(0.8, 1.2, 0.0);
    TemplateSet t = draw_templates(4, 6.0, 512, 51);
    auto region = full_circle();
    QuadratureSpec quad{64, 1, 1};
    auto nonlins = all_nonlins();

    CHECK(invariance_error(f, GroupElement::identity(GroupId::rotations), t, nonlins, region,
                           quad) == 0.0);

    oracles::RandomElements rnd(83);
    for (int i = 0; i < 3; ++i) {
        auto r = GroupElement::rotation(rnd.uniform(-kPi, kPi));
        CHECK(invariance_error(f, r, t, nonlins, region, quad) <= 1e-2);
    }
}

TEST_CASE("invariance_error: partial pooling gives strictly larger error") {
    ImageGrid f = make_gaussian(0.8, 1.2, 0.0);
    TemplateSet t = draw_templates(4, 6.0, 512, 61);
    auto nonlins = all_nonlins();
    auto full = full_circle();
    auto partial = PoolingRegion::rotations_arc({-0.5, 0.5});
    QuadratureSpec quad{64, 1, 1};

    int larger = 0;
    oracles::RandomElements rnd(89);
    for (int i = 0; i < 5; ++i) {
        auto r = GroupElement::rotation(rnd.uniform(0.8, 2.0));
        double e_full = invariance_error(f, r, t, nonlins, full, quad);
        double e_partial = invariance_error(f, r, t, nonlins, partial, quad);
        if (e_partial > e_full) ++larger;
    }
    // rotating far outside a narrow arc cannot stay invariant
    CHECK(larger == 5);
}

TEST_CASE("signature CSV export") {
    ImageGrid f = make_gaussian(0.8, 0.5, 0.0, 6.0, 128);
    TemplateSet t = draw_templates(2, 6.0, 128, 71);
    auto nonlins = all_nonlins();
    auto sig = signature(f, t, nonlins, full_circle(), QuadratureSpec{8, 1, 1});
    auto path = std::filesystem::temp_directory_path() / "orbitpool_sig.csv";
    write_signature_csv(path.string(), sig, nonlins);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "template,sigmoid,relu,modulus,tanh,abs_power:2");
    std::string row;
    int rows = 0;
    while (std::getline(in, row)) ++rows;
    CHECK(rows == 2);
    std::filesystem::remove(path);
}
