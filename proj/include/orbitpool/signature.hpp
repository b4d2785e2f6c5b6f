#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "orbitpool/image.hpp"
#include "orbitpool/pooling.hpp"

namespace orbitpool {

/// Unit-norm template images. Uniform sampling of the L2 unit sphere is not
/// realizable, so templates are unit-normalized band-limited noise; the
/// invariance identities tested downstream do not depend on the template law.
struct TemplateSet {
    std::vector<ImageGrid> templates;
    std::uint64_t seed = 0;

    std::size_t size() const { return templates.size(); }
    const ImageGrid& operator[](std::size_t k) const { return templates[k]; }
};

inline TemplateSet draw_templates(int count, double half_width, int resolution,
                                  std::uint64_t seed) {
    if (count < 1) throw InvalidArgument("draw_templates: need at least one template");
    TemplateSet set;
    set.seed = seed;
    set.templates.reserve(count);
    for (int k = 0; k < count; ++k) {
        // envelope and band chosen so eight draws stay pairwise nearly
        // orthogonal (max |<ti,tj>| about 0.2 over 20 seeds at n = 256)
        ImageSpec spec;
        spec.kind = ImageSpec::Kind::bandlimited_noise;
        spec.sigma_x = spec.sigma_y = half_width / 2.5;
        spec.frequency = 1.2;
        spec.mode_count = 192;
        spec.seed = CounterRng(seed, 40'000 + static_cast<std::uint64_t>(k)).key();
        ImageGrid raw = synthesize(spec, half_width, resolution);
        double n = norm2(raw);
        if (n == 0.0) throw Error("draw_templates: degenerate noise draw");
        set.templates.push_back(scaled(raw, 1.0 / n));
    }
    return set;
}

/// Pointwise nonlinearities applied to template responses.
class Nonlinearity {
public:
    enum class Tag { sigmoid, relu, modulus, tanh, abs_power };

    static Nonlinearity sigmoid() { return {Tag::sigmoid, 1.0}; }
    static Nonlinearity relu() { return {Tag::relu, 1.0}; }
    static Nonlinearity modulus() { return {Tag::modulus, 1.0}; }
    static Nonlinearity tanh() { return {Tag::tanh, 1.0}; }
    static Nonlinearity abs_power(double p) {
        if (p < 1.0) throw InvalidArgument("abs_power: exponent must be at least 1");
        return {Tag::abs_power, p};
    }

    double operator()(double x) const {
        switch (tag_) {
            case Tag::sigmoid: return 1.0 / (1.0 + std::exp(-x));
            case Tag::relu: return x > 0.0 ? x : 0.0;
            case Tag::modulus: return std::abs(x);
            case Tag::tanh: return std::tanh(x);
            case Tag::abs_power: return std::pow(std::abs(x), power_);
        }
        return 0.0;
    }

    Tag tag() const { return tag_; }
    double power() const { return power_; }

    std::string name() const {
        switch (tag_) {
            case Tag::sigmoid: return "sigmoid";
            case Tag::relu: return "relu";
            case Tag::modulus: return "modulus";
            case Tag::tanh: return "tanh";
            case Tag::abs_power: {
                char buf[32];
                std::snprintf(buf, sizeof buf, "abs_power:%g", power_);
                return buf;
            }
        }
        return "?";
    }

    static Nonlinearity parse(const std::string& text) {
        if (text == "sigmoid") return sigmoid();
        if (text == "relu") return relu();
        if (text == "modulus") return modulus();
        if (text == "tanh") return tanh();
        if (text.rfind("abs_power:", 0) == 0) return abs_power(std::stod(text.substr(10)));
        throw InvalidArgument("unknown nonlinearity: " + text);
    }

private:
    Nonlinearity(Tag tag, double power) : tag_(tag), power_(power) {}

    Tag tag_;
    double power_;
};

/// Histogram-style signature: entry (k, n) is the quadrature average over
/// the pooling region of eta_n(<L_g f, t_k>).
class Signature {
public:
    Signature(std::size_t template_count, std::size_t nonlinearity_count)
        : k_(template_count), n_(nonlinearity_count), data_(k_ * n_, 0.0) {}

    std::size_t template_count() const { return k_; }
    std::size_t nonlinearity_count() const { return n_; }
    double at(std::size_t k, std::size_t n) const { return data_[k * n_ + n]; }
    double& at(std::size_t k, std::size_t n) { return data_[k * n_ + n]; }
    const std::vector<double>& data() const { return data_; }

private:
    std::size_t k_, n_;
    std::vector<double> data_;
};

/// Per-node template responses <L_g f, t_k> over the quadrature of the
/// region, node-major. Useful for checking the pooled-response identities.
inline std::vector<std::vector<double>> template_responses(const ImageGrid& f,
                                                           const TemplateSet& templates,
                                                           const PoolingRegion& region,
                                                           const QuadratureSpec& quad,
                                                           Interp interp = Interp::bicubic) {
    auto nodes = quadrature_nodes(region, quad);
    std::vector<std::vector<double>> responses(templates.size(),
                                               std::vector<double>(nodes.size(), 0.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        ImageGrid warped = act(nodes[i], f, interp);
        for (std::size_t k = 0; k < templates.size(); ++k)
            responses[k][i] = inner(warped, templates[k]);
    }
    return responses;
}

inline Signature signature(const ImageGrid& f, const TemplateSet& templates,
                           const std::vector<Nonlinearity>& nonlins, const PoolingRegion& region,
                           const QuadratureSpec& quad, Interp interp = Interp::bicubic) {
    if (nonlins.empty()) throw InvalidArgument("signature: need at least one nonlinearity");
    auto responses = template_responses(f, templates, region, quad, interp);
    std::size_t node_count = responses.empty() ? 0 : responses[0].size();
    Signature sig(templates.size(), nonlins.size());
    std::vector<double> vals(node_count);
    for (std::size_t k = 0; k < templates.size(); ++k) {
        for (std::size_t n = 0; n < nonlins.size(); ++n) {
            for (std::size_t i = 0; i < node_count; ++i) vals[i] = nonlins[n](responses[k][i]);
            sig.at(k, n) = pairwise_sum(vals.begin(), vals.end()) /
                           static_cast<double>(node_count);
        }
    }
    return sig;
}

/// Worst-case relative signature drift under the displacement g:
/// max over (k, n) of |h(f) - h(L_g f)| / (|h(f)| + 1e-12).
inline double invariance_error(const ImageGrid& f, const GroupElement& g,
                               const TemplateSet& templates,
                               const std::vector<Nonlinearity>& nonlins,
                               const PoolingRegion& region, const QuadratureSpec& quad,
                               Interp interp = Interp::bicubic) {
    Signature base = signature(f, templates, nonlins, region, quad, interp);
    Signature moved = signature(act(g, f, interp), templates, nonlins, region, quad, interp);
    double worst = 0.0;
    for (std::size_t k = 0; k < base.template_count(); ++k)
        for (std::size_t n = 0; n < base.nonlinearity_count(); ++n) {
            double denom = std::abs(base.at(k, n)) + 1e-12;
            worst = std::max(worst, std::abs(base.at(k, n) - moved.at(k, n)) / denom);
        }
    return worst;
}

/// CSV export: one row per template, one column per nonlinearity.
inline void write_signature_csv(const std::string& path, const Signature& sig,
                                const std::vector<Nonlinearity>& nonlins) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("write_signature_csv: cannot open " + path);
    out << "template";
    for (const auto& nl : nonlins) out << "," << nl.name();
    out << "\n";
    char num[64];
    for (std::size_t k = 0; k < sig.template_count(); ++k) {
        out << k;
        for (std::size_t n = 0; n < sig.nonlinearity_count(); ++n) {
            std::snprintf(num, sizeof num, "%.17g", sig.at(k, n));
            out << "," << num;
        }
        out << "\n";
    }
}

}  // namespace orbitpool
