#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <json.hpp>

#include "orbitpool/errors.hpp"

namespace orbitpool {

using Json = nlohmann::json;

/// Slack budget for comparing discretized quantities against continuum
/// inequalities. Every component is measured, never guessed: quadrature from
/// node-refinement deltas, interpolation from resampling round trips, and
/// Monte Carlo as a three-sigma confidence ratio.
struct EpsilonBudget {
    double quadrature = 0.0;
    double interpolation = 0.0;
    double monte_carlo = 0.0;

    double total() const { return quadrature + interpolation + monte_carlo; }

    Json to_json() const {
        return Json{{"quadrature", quadrature},
                    {"interpolation", interpolation},
                    {"monte_carlo", monte_carlo},
                    {"total", total()}};
    }

    static EpsilonBudget from_json(const Json& j) {
        EpsilonBudget b;
        b.quadrature = j.at("quadrature").get<double>();
        b.interpolation = j.at("interpolation").get<double>();
        b.monte_carlo = j.at("monte_carlo").get<double>();
        return b;
    }
};

/// One bound check: a measured left side against an analytic right side,
/// with the tolerance budget and enough provenance to reproduce the run.
struct VerificationReport {
    std::string experiment;
    std::string check;  // which inequality this report certifies
    double measured_lhs = 0.0;
    double analytic_rhs = 0.0;
    EpsilonBudget epsilon;
    double noise_floor = 0.0;  // absolute slack for identically-zero right sides
    bool pass = false;
    Json provenance = Json::object();

    /// lhs / rhs with the 0/0 and x/0 conventions fixed.
    double ratio() const {
        if (analytic_rhs == 0.0)
            return measured_lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
        return measured_lhs / analytic_rhs;
    }

    /// The pass rule, recomputable from stored fields alone.
    bool recompute_pass() const {
        return measured_lhs <= analytic_rhs * (1.0 + epsilon.total()) + noise_floor;
    }

    void finalize() { pass = recompute_pass(); }

    Json to_json() const {
        Json j;
        j["experiment"] = experiment;
        j["check"] = check;
        j["measured_lhs"] = measured_lhs;
        j["analytic_rhs"] = analytic_rhs;
        double r = ratio();
        if (std::isinf(r))
            j["ratio"] = "inf";
        else
            j["ratio"] = r;
        j["epsilon"] = epsilon.to_json();
        j["noise_floor"] = noise_floor;
        j["pass"] = pass;
        j["provenance"] = provenance;
        return j;
    }

    static VerificationReport from_json(const Json& j) {
        VerificationReport r;
        r.experiment = j.at("experiment").get<std::string>();
        r.check = j.at("check").get<std::string>();
        r.measured_lhs = j.at("measured_lhs").get<double>();
        r.analytic_rhs = j.at("analytic_rhs").get<double>();
        r.epsilon = EpsilonBudget::from_json(j.at("epsilon"));
        r.noise_floor = j.at("noise_floor").get<double>();
        r.pass = j.at("pass").get<bool>();
        r.provenance = j.value("provenance", Json::object());
        if (r.pass != r.recompute_pass())
            throw InvalidArgument("VerificationReport: stored pass flag disagrees with fields");
        return r;
    }
};

}  // namespace orbitpool
