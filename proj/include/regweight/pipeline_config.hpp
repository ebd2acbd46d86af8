#pragma once

// Numeric constants of the randomized 3-weighting pipeline, stored as exact rationals,
// and the closed-form bounds that depend only on them.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>

#include "regweight/rational.hpp"

namespace regweight {

/// Raised when a configuration is unusable, or unusable for the given degree.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct PipelineConfig {
    std::string name = "custom";

    Rational p0 = dec("0.05");          // V0 inclusion probability
    Rational tol_v0 = dec("3e-4");      // |d_V0(v) - p0 d| <= tol_v0 d
    std::int64_t q = 10000;             // number of V1 classes
    Rational tol_class = dec("11e-6");  // |d_V1i(v) - d_V1(v)/q| <= tol_class d
    Rational tol_eprime = dec("6e-4");  // |d_E'(v) - (i-1)/q d_G'1(v)| <= tol_eprime d
    Rational p_e1 = dec("0.08");        // E1 inclusion probability on E(V0,V1)
    Rational tol_e1_v1 = dec("5e-5");
    Rational tol_e1_v0 = dec("1e-3");
    Rational tol_e0 = dec("1e-3");
    Rational tol_c0class = dec("1e-3");
    Rational tol_e0_v1 = dec("2e-4");
    std::int64_t c0_classes = 5;  // labels 0..c0_classes-1; E0 inclusion c0(v)/c0_classes
    std::int64_t retry_budget = 1000;
    std::int64_t min_degree = 1;

    /// Constants exactly as the large-degree construction uses them; needs d >= 10^8.
    static PipelineConfig paper() {
        PipelineConfig c;
        c.name = "paper";
        c.min_degree = 100000000;
        return c;
    }

    /// Scaled-down constants for d in roughly [20, 200]. Engineering choice with no
    /// success guarantee: tolerances are wide enough for whole-sample rejection to accept
    /// on a few thousand vertices.
    static PipelineConfig desk() {
        PipelineConfig c;
        c.name = "desk";
        c.p0 = dec("0.5");
        c.tol_v0 = dec("0.24");
        c.q = 2;
        c.tol_class = dec("0.3");
        c.tol_eprime = dec("0.3");
        c.p_e1 = dec("0.9");
        c.tol_e1_v1 = dec("0.16");
        c.tol_e1_v0 = dec("0.16");
        c.tol_e0 = dec("0.12");
        c.tol_c0class = dec("0.1");
        c.tol_e0_v1 = dec("0.12");
        c.c0_classes = 40;
        c.retry_budget = 1000;
        c.min_degree = 20;
        return c;
    }

    static PipelineConfig preset(const std::string& name) {
        if (name == "paper") return paper();
        if (name == "desk") return desk();
        throw ConfigError("unknown preset '" + name + "' (expected paper or desk)");
    }

    /// Degree-independent sanity of the constants.
    void validate() const {
        auto prob = [](const Rational& p, const char* what) {
            if (p <= 0 || p >= 1) throw ConfigError(std::string(what) + " must lie in (0,1)");
        };
        auto positive = [](const Rational& t, const char* what) {
            if (t <= 0) throw ConfigError(std::string(what) + " must be positive");
        };
        prob(p0, "p0");
        prob(p_e1, "p_e1");
        positive(tol_v0, "tol_v0");
        positive(tol_class, "tol_class");
        positive(tol_eprime, "tol_eprime");
        positive(tol_e1_v1, "tol_e1_v1");
        positive(tol_e1_v0, "tol_e1_v0");
        positive(tol_e0, "tol_e0");
        positive(tol_c0class, "tol_c0class");
        positive(tol_e0_v1, "tol_e0_v1");
        if (q < 2) throw ConfigError("q must be at least 2");
        if (c0_classes < 2) throw ConfigError("c0_classes must be at least 2");
        if (retry_budget < 1) throw ConfigError("retry_budget must be at least 1");
        if (sum_coefficient_at(q) <= 0) throw ConfigError("d_V0 coefficient of the V1 sums must stay positive");
    }

    void validate_for_degree(std::int64_t d) const {
        validate();
        if (d < min_degree) {
            throw ConfigError("preset '" + name + "' requires d >= " + std::to_string(min_degree) + ", got d = " +
                              std::to_string(d));
        }
    }

    // --- derived quantities -------------------------------------------------------------

    /// d'(v) of the 9/16 subgraph lies within ratio * d(v) +- slack.
    static Rational subgraph_ratio() { return Rational(9, 16); }
    static std::int64_t subgraph_slack() { return 3; }

    /// Marginal probability that an E* edge enters E0 (0.4 for five labels).
    Rational e0_marginal() const { return Rational(c0_classes - 1, 2 * c0_classes); }

    /// Coefficient of d_V0(v) in the sum of a V1 vertex of class i.
    Rational sum_coefficient_at(std::int64_t i) const {
        const Rational m0 = e0_marginal();
        return 2 - m0 - (1 - m0) * p_e1 - 2 * subgraph_ratio() * Rational(i - 1, q);
    }

    /// Centre coefficient of the class-i sum interval, in units of d.
    /// Paper constants give 1.0776 + 1.06875 (i-1) 10^-4.
    Rational class_centre(std::int64_t i) const {
        const Rational m0 = e0_marginal();
        return 1 + (2 - m0 - (1 - m0) * p_e1) * p0 + 2 * subgraph_ratio() * (1 - p0) * Rational(i - 1, q);
    }

    /// Gap between consecutive class centres, in units of d (1.06875 10^-4 for the paper).
    Rational class_step() const { return 2 * subgraph_ratio() * (1 - p0) / q; }

    /// Half-width of the class interval, in units of d (0.0018956 for the paper).
    Rational class_half_width() const {
        const Rational m0 = e0_marginal();
        return (2 - m0 - (1 - m0) * p_e1) * tol_v0 + 2 * tol_eprime + tol_e0_v1 + (1 - m0) * tol_e1_v1;
    }

    /// Absolute slack from the +-3 of the 9/16 subgraph that the d-proportional terms do
    /// not absorb; zero once d is large (d >= 17778 for the paper constants).
    Rational class_slack(std::int64_t i, std::int64_t d) const {
        const Rational i1(i - 1);
        const Rational raw = 2 * subgraph_slack() * i1 / q - 2 * subgraph_ratio() * i1 * tol_v0 * d / q;
        return raw > 0 ? raw : Rational(0);
    }

    Rational class_upper(std::int64_t i, std::int64_t d) const {
        return (class_centre(i) + class_half_width()) * d + class_slack(i, d);
    }

    Rational class_lower(std::int64_t i, std::int64_t d) const {
        return (class_centre(i) - class_half_width()) * d - class_slack(i, d);
    }

    /// Base of the target sums of class i: floor of the class upper endpoint.
    BigInt class_target_base(std::int64_t i, std::int64_t d) const { return floor_of(class_upper(i, d)); }

    /// Bound on the maximum degree inside one V1 class, in units of d (1.0603 10^-4 for the paper).
    Rational delta2_coefficient() const { return (1 - p0 + tol_v0) / q + tol_class; }
};

}  // namespace regweight
