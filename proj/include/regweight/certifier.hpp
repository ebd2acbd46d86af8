#pragma once

// Numeric audit of the large-degree construction: every linear bound is re-derived from the
// constants of PipelineConfig::paper() in exact rationals and compared with the literal
// coefficients of the published chain; exponential tail bounds are evaluated in log space
// with outward-widened interval arithmetic.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "regweight/pipeline_config.hpp"
#include "regweight/rational.hpp"

namespace regweight {

/// Closed interval of doubles guaranteed to contain the true value.
struct Interval {
    double lo = 0;
    double hi = 0;

    static Interval widened(double lo, double hi, int ulps = 4) {
        for (int k = 0; k < ulps; ++k) {
            lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
            hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
        }
        return {lo, hi};
    }

    static Interval of(const Rational& x) {
        const double v = to_double(x);
        return widened(v, v);
    }

    static Interval of(std::int64_t x) { return of(Rational(x)); }
};

inline Interval operator+(Interval a, Interval b) { return Interval::widened(a.lo + b.lo, a.hi + b.hi, 1); }
inline Interval operator-(Interval a, Interval b) { return Interval::widened(a.lo - b.hi, a.hi - b.lo, 1); }
inline Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

inline Interval operator*(Interval a, Interval b) {
    const double c[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    return Interval::widened(*std::min_element(c, c + 4), *std::max_element(c, c + 4), 1);
}

inline Interval operator/(Interval a, Interval b) {
    if (b.lo <= 0 && b.hi >= 0) throw std::domain_error("interval division by an interval containing 0");
    const double c[] = {a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi};
    return Interval::widened(*std::min_element(c, c + 4), *std::max_element(c, c + 4), 1);
}

inline Interval log(Interval a) {
    if (a.lo <= 0) throw std::domain_error("interval log of a non-positive value");
    return Interval::widened(std::log(a.lo), std::log(a.hi));
}

inline Interval exp(Interval a) { return Interval::widened(std::exp(a.lo), std::exp(a.hi)); }

inline std::string interval_string(Interval a) {
    std::ostringstream out;
    out.precision(17);
    out << '[' << a.lo << ", " << a.hi << ']';
    return out.str();
}

/// One inequality (or identity) of the chain, evaluated.
struct BoundCheck {
    std::string name;
    std::string relation;  // "<", "<=" or "="
    std::string lhs;
    std::string rhs;
    std::string margin;  // rhs - lhs
    double margin_value = 0;
    bool exact = true;
    bool holds = false;
    std::string note;
};

namespace detail {

inline BoundCheck compare(std::string name, const Rational& lhs, const std::string& rel, const Rational& rhs,
                          std::string note = {}) {
    BoundCheck c;
    c.name = std::move(name);
    c.relation = rel;
    c.lhs = exact_string(lhs);
    c.rhs = exact_string(rhs);
    const Rational m = rhs - lhs;
    c.margin = exact_string(m);
    c.margin_value = to_double(m);
    c.exact = true;
    c.holds = rel == "<" ? lhs < rhs : rel == "<=" ? lhs <= rhs : lhs == rhs;
    c.note = std::move(note);
    return c;
}

inline BoundCheck compare(std::string name, Interval lhs, const std::string& rel, Interval rhs, std::string note = {}) {
    BoundCheck c;
    c.name = std::move(name);
    c.relation = rel;
    c.lhs = interval_string(lhs);
    c.rhs = interval_string(rhs);
    const Interval m = rhs - lhs;
    c.margin = interval_string(m);
    c.margin_value = m.lo;
    c.exact = false;
    c.holds = rel == "<" ? lhs.hi < rhs.lo : lhs.hi <= rhs.lo;
    c.note = std::move(note);
    return c;
}

inline Interval ln_of(std::int64_t x) { return log(Interval::of(x)); }

}  // namespace detail

// --- technical inequalities ---------------------------------------------------------------

/// f(x) = x / 4.9e6 - ln(2ex) > 0, its squared form x / 2.45e6 - ln(4ex^2) > 0, and the
/// decimal estimate used to show f(10^8) > 0.
inline std::vector<BoundCheck> check_tech_inequalities(std::int64_t x) {
    std::vector<BoundCheck> out;
    const Interval ix = Interval::of(x);
    const Interval one = Interval::of(1);
    const Interval ln2 = detail::ln_of(2);
    const Interval lnx = log(ix);

    const Interval f = ix / Interval::of(dec("4.9e6")) - (ln2 + one + lnx);
    out.push_back(detail::compare("tech_f_positive", Interval::of(0), "<", f,
                                  "f(x) = x/4.9e6 - ln(2ex) at x = " + std::to_string(x)));
    const Interval g = ix / Interval::of(dec("2.45e6")) - (Interval::of(2) * ln2 + one + Interval::of(2) * lnx);
    out.push_back(detail::compare("tech_squared_positive", Interval::of(0), "<", g,
                                  "x/2.45e6 - ln(4ex^2), i.e. 2exp(-x/2.45e6) < 1/(2ex^2)"));

    out.push_back(detail::compare("tech_display_hundred_over_4_9", dec("100") / dec("4.9"), "=",
                                  (20 * dec("4.9") + 2) / dec("4.9")));
    out.push_back(detail::compare("tech_display_lower_20_4", dec("20.4"), "<", dec("100") / dec("4.9")));
    out.push_back(detail::compare("tech_display_ln2", ln2, "<", Interval::of(dec("0.7"))));
    out.push_back(detail::compare("tech_display_ln10", detail::ln_of(10), "<", Interval::of(dec("2.31"))));
    out.push_back(detail::compare("tech_display_remainder", Rational(0), "<",
                                  dec("20.4") - dec("0.7") - 1 - 8 * dec("2.31"), "20.4 - 0.7 - 1 - 8*2.31 = 0.22"));
    return out;
}

// --- local lemma premises -------------------------------------------------------------------

/// One Chernoff tail 2 exp(-d / c) of the sampling stages.
struct TailBound {
    std::string event;
    Rational constant;          // recomputed from the configuration
    Rational literal;           // as printed
    int target_power = 2;       // tail must beat 1/(k e d^power)
    std::int64_t target_k = 2;  // k above
};

inline std::vector<TailBound> tail_bounds(const PipelineConfig& c = PipelineConfig::paper()) {
    const Rational k(c.c0_classes);
    const Rational q(c.q);
    const Rational v0_hi = c.p0 + c.tol_v0;
    const Rational v1_hi = 1 - c.p0 + c.tol_v0;
    const Rational half(1, 2);
    const Rational gprime_hi = dec("0.54");
    const Rational sq_class = c.tol_class * c.tol_class;
    return {
        {"v0_degree", 3 * c.p0 / (c.tol_v0 * c.tol_v0), dec("5/3") * dec("1e6"), 2, 1},
        {"v1_class_degree", 3 * v1_hi / q / sq_class, dec("285.09/121") * dec("1e6"), 2, 2},
        {"eprime_degree_mid_classes", 3 * half * gprime_hi / (c.tol_eprime * c.tol_eprime), dec("2.25e6"), 2, 2},
        {"eprime_degree_low_classes", 3 * Rational(11) / q / (Rational(1, 2) / q * (Rational(1, 2) / q)),
         dec("33/25") * dec("1e6"), 2, 2},
        {"e1_degree_v1_side", 3 * c.p_e1 * v0_hi / (c.tol_e1_v1 * c.tol_e1_v1), dec("4.8288e6"), 1, 1},
        {"e1_degree_v0_side", 3 * c.p_e1 * v1_hi / (c.tol_e1_v0 * c.tol_e1_v0), Rational(24 * 9503), 1, 1},
        {"e0_degree_v0_side",
         3 * Rational(c.c0_classes - 1) / k * ((1 - c.p_e1) * v1_hi + c.tol_e1_v0) / (c.tol_e0 * c.tol_e0),
         dec("2100662.4"), 2, 2},
        {"v0_label_degree", 3 / k * v0_hi / (c.tol_c0class * c.tol_c0class), Rational(30180), 2, 2},
        {"e0_degree_v1_side", 3 * c.e0_marginal() * ((1 - c.p_e1) * v0_hi + c.tol_e1_v1) / (c.tol_e0_v1 * c.tol_e0_v1),
         Rational(1389780), 2, 2},
    };
}

namespace detail {

/// ln of the tail 2 exp(-d/c).
inline Interval ln_tail(std::int64_t d, const Rational& c) { return ln_of(2) - Interval::of(d) / Interval::of(c); }

/// ln of 1/(k e d^power).
inline Interval ln_target(std::int64_t d, std::int64_t k, int power) {
    return -(ln_of(k) + Interval::of(1) + Interval::of(power) * ln_of(d));
}

}  // namespace detail

/// For each sampling claim: the exponent constants, each tail against its stated target,
/// and the symmetric local lemma condition p e (D+1) <= 1 both for the stated probability
/// bound and (strictly) for the actual tail.
inline std::vector<BoundCheck> check_lll_premises(std::int64_t d) {
    std::vector<BoundCheck> out;
    const std::string scope = d < 100000000 ? "d below 10^8: outside the guaranteed range" : "";
    const auto tails = tail_bounds();
    for (const auto& t : tails) {
        out.push_back(detail::compare("exponent_constant_" + t.event, t.constant, "=", t.literal,
                                      "recomputed from the configured constants"));
        out.push_back(detail::compare("tail_" + t.event, detail::ln_tail(d, t.constant), "<",
                                      detail::ln_target(d, t.target_k, t.target_power),
                                      "ln(2exp(-d/c)) vs ln(1/(" + (t.target_k == 1 ? std::string() : std::to_string(t.target_k)) +
                                          "e d^" + std::to_string(t.target_power) + "))" + (scope.empty() ? "" : "; " + scope)));
    }
    out.push_back(detail::compare("e0_marginal_probability", (0 + dec("0.2") + dec("0.4") + dec("0.6") + dec("0.8")) / 5,
                                  "=", PipelineConfig::paper().e0_marginal(), "(0+0.2+0.4+0.6+0.8)/5"));

    const BigInt dd(d);
    const Rational d2 = Rational(dd * dd);
    struct Claim {
        std::string name;
        Rational bound_times_e;  // stated p times e
        BigInt dependency;       // D
        std::vector<std::string> events;
    };
    const std::vector<Claim> claims = {
        {"claim1", 1 / d2, dd * (dd - 1), {"v0_degree"}},
        {"claim2", 1 / (2 * d2), 2 * dd * dd - 2,
         {"v1_class_degree", "eprime_degree_mid_classes", "eprime_degree_low_classes"}},
        {"claim3", Rational(1) / Rational(dd), dd - 2, {"e1_degree_v1_side", "e1_degree_v0_side"}},
        {"claim4", 1 / (2 * d2), 2 * dd * dd - 1, {"e0_degree_v0_side", "v0_label_degree", "e0_degree_v1_side"}},
    };
    for (const auto& cl : claims) {
        out.push_back(detail::compare("lll_" + cl.name + "_stated_bound", cl.bound_times_e * Rational(cl.dependency + 1),
                                      "<=", Rational(1), "p e (D+1) with D = " + cl.dependency.str()));
        Interval worst{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (const auto& name : cl.events) {
            const auto it = std::find_if(tails.begin(), tails.end(), [&](const TailBound& t) { return t.event == name; });
            const Interval l = detail::ln_tail(d, it->constant);
            worst = {std::max(worst.lo, l.lo), std::max(worst.hi, l.hi)};
        }
        const Interval ln_d1 = log(Interval::of(Rational(cl.dependency + 1)));
        out.push_back(detail::compare("lll_" + cl.name + "_tail", worst + Interval::of(1) + ln_d1, "<", Interval::of(0),
                                      "ln p + 1 + ln(D+1) with p the largest Chernoff tail of the claim"));
    }
    return out;
}

// --- sum separation -------------------------------------------------------------------------

/// Lower bound on sigma(v), v in V0 with label i: (a + b i) d - 1 with {a, b} returned.
inline std::pair<Rational, Rational> v0_lower_coefficients(const PipelineConfig& c) {
    const Rational k(c.c0_classes);
    const Rational keep = 1 - c.p_e1;
    // [2 + (1-i/K) keep - (1-i/K) tol_e1_v0 - tol_e0 - 2 tol_c0] d - [2/K + (1-i/K) keep] d_V0 - 1,
    // with d_V0 <= (p0 + tol_v0) d.
    const Rational v0_hi = c.p0 + c.tol_v0;
    const Rational a = 2 + keep - c.tol_e1_v0 - c.tol_e0 - 2 * c.tol_c0class - (2 / k + keep) * v0_hi;
    const Rational b = (-keep + c.tol_e1_v0) / k + keep / k * v0_hi;
    return {a, b};
}

/// Upper bound on sigma(v), v in V0 with label i: (a + b i) d.
inline std::pair<Rational, Rational> v0_upper_coefficients(const PipelineConfig& c) {
    const Rational k(c.c0_classes);
    const Rational a = 3 + c.tol_e0;
    const Rational b = (c.tol_e1_v0 - (1 - c.p_e1) * (1 - c.p0 - c.tol_v0)) / k;
    return {a, b};
}

/// Every class-separation step of the chain at degree d, exactly.
inline std::vector<BoundCheck> check_sum_separation(std::int64_t d) {
    const auto cfg = PipelineConfig::paper();
    std::vector<BoundCheck> out;
    const Rational rd(d);

    out.push_back(detail::compare("class_centre_constant", cfg.class_centre(1), "=", dec("1.0776")));
    out.push_back(detail::compare("class_step", cfg.class_step(), "=", dec("1.06875e-4")));
    out.push_back(detail::compare("class_half_width", cfg.class_half_width(), "=", dec("0.0018956")));
    out.push_back(detail::compare("class_degree_bound", cfg.delta2_coefficient(), "=", dec("1.0603e-4")));

    // Consecutive V1 classes: top of class i (with colours) stays below the base of class i+1.
    {
        Rational worst_margin;
        std::int64_t worst_i = 0;
        bool all = true;
        const Rational top_gap = cfg.class_half_width() + cfg.delta2_coefficient();
        for (std::int64_t i = 1; i < cfg.q; ++i) {
            const Rational lhs = (cfg.class_centre(i) + top_gap) * rd + cfg.class_slack(i, d);
            const Rational rhs(cfg.class_target_base(i + 1, d));
            const Rational m = rhs - lhs;
            if (!(lhs < rhs)) all = false;
            if (worst_i == 0 || m < worst_margin) {
                worst_margin = m;
                worst_i = i;
            }
        }
        const Rational lhs = (cfg.class_centre(worst_i) + top_gap) * rd + cfg.class_slack(worst_i, d);
        auto c = detail::compare("v1_adjacent_classes", lhs, "<", Rational(cfg.class_target_base(worst_i + 1, d)),
                                 "checked for i = 1.." + std::to_string(cfg.q - 1) + "; tightest at i = " +
                                     std::to_string(worst_i));
        c.holds = all;
        out.push_back(c);
        out.push_back(detail::compare("v1_adjacent_classes_step", cfg.delta2_coefficient() * rd, "<",
                                      cfg.class_step() * rd - 1, "Delta2 bound < step - 1"));
    }

    const auto [la, lb] = v0_lower_coefficients(cfg);
    const auto [ua, ub] = v0_upper_coefficients(cfg);
    const std::string comma_note = "decimal comma of the printed 0,1745448 read as 0.1745448";
    out.push_back(detail::compare("v0_lower_constant", la, "=", dec("2.849604")));
    out.push_back(detail::compare("v0_lower_slope", lb, "=", -dec("0.1745448"), comma_note));
    out.push_back(detail::compare("v0_upper_constant", ua, "=", dec("3.001")));
    out.push_back(detail::compare("v0_upper_slope", ub, "=", -dec("0.1745448")));
    out.push_back(detail::compare("v0_next_upper_constant", ua + ub, "=", dec("2.8264552")));
    out.push_back(detail::compare("v0_lower_at_top_label", la + lb * (cfg.c0_classes - 1), "=", dec("2.1514248"),
                                  comma_note));

    for (std::int64_t i = 0; i + 1 < cfg.c0_classes; ++i) {
        const Rational upper_next = (ua + ub * (i + 1)) * rd;
        const Rational lower_here = (la + lb * i) * rd - 1;
        out.push_back(detail::compare("v0_labels_" + std::to_string(i + 1) + "_below_" + std::to_string(i), upper_next,
                                      "<", lower_here));
    }
    for (std::int64_t i = 0; i < cfg.c0_classes; ++i) {
        out.push_back(detail::compare("v0_lower_positive_label_" + std::to_string(i), Rational(0), "<",
                                      (la + lb * i) * rd - 1));
    }

    const Rational v1_top = cfg.class_centre(cfg.q) + cfg.class_half_width() + cfg.delta2_coefficient();
    out.push_back(detail::compare("v1_top_constant", v1_top, "=", dec("2.148244755")));
    out.push_back(detail::compare("v1_top_below_v0_bottom", v1_top * rd + cfg.class_slack(cfg.q, d), "<",
                                  (la + lb * (cfg.c0_classes - 1)) * rd - 1, "2.148244755 d < 2.1514248 d - 1"));

    // Degree window of the 9/16 subgraph inside V1.
    const Rational r = PipelineConfig::subgraph_ratio();
    out.push_back(detail::compare("gprime1_degree_low", dec("0.5") * rd, "<",
                                  r * (1 - cfg.p0 - cfg.tol_v0) * rd - PipelineConfig::subgraph_slack()));
    out.push_back(detail::compare("gprime1_degree_high", r * (1 - cfg.p0 + cfg.tol_v0) * rd + PipelineConfig::subgraph_slack(),
                                  "<", dec("0.54") * rd));

    // Enough personal edges: 0.5 = 2/K + (0.5 - 2/K) with the second part beating 2 tol_c0 d.
    const Rational counting =
        (Rational(1, 2) - Rational(2, cfg.c0_classes)) * (cfg.p0 - cfg.tol_v0) - 2 * cfg.tol_c0class;
    out.push_back(detail::compare("v0_counting_coefficient", counting, "=", dec("0.1") * dec("0.0497") - dec("0.002")));
    out.push_back(detail::compare("v0_counting_positive", Rational(0), "<", counting));
    return out;
}

// --- feasibility of the E1 adjustment ---------------------------------------------------------

/// d_E1 lower bound against the width of the class interval plus the colour range.
inline std::vector<BoundCheck> check_feasibility_margin(std::int64_t d) {
    const auto cfg = PipelineConfig::paper();
    std::vector<BoundCheck> out;
    const Rational capacity = cfg.p_e1 * (cfg.p0 - cfg.tol_v0) - cfg.tol_e1_v1;
    const Rational need = 2 * cfg.class_half_width() + cfg.delta2_coefficient();
    out.push_back(detail::compare("e1_capacity_constant", capacity, "=", dec("0.003926")));
    out.push_back(detail::compare("e1_need_identity", 2 * dec("0.0018956") + dec("1.0603e-4"), "=", dec("0.00389723")));
    out.push_back(detail::compare("e1_need_constant", need, "=", dec("0.00389723")));
    out.push_back(detail::compare("e1_capacity_exceeds_need", need, "<", capacity));
    out.push_back(detail::compare("e1_spare_edges", need * Rational(d), "<", capacity * Rational(d),
                                  "spare E1 edges per vertex: " + decimal_string((capacity - need) * Rational(d))));
    return out;
}

struct CertifierReport {
    std::int64_t d = 0;
    bool in_guaranteed_range = false;
    std::vector<BoundCheck> checks;

    bool all_hold() const {
        return std::all_of(checks.begin(), checks.end(), [](const BoundCheck& c) { return c.holds; });
    }
};

inline CertifierReport certify(std::int64_t d) {
    if (d < 1) throw std::invalid_argument("certify: d must be positive");
    CertifierReport r;
    r.d = d;
    r.in_guaranteed_range = d >= 100000000;
    for (auto* part : {&check_tech_inequalities, &check_lll_premises, &check_sum_separation, &check_feasibility_margin}) {
        auto checks = (*part)(d);
        r.checks.insert(r.checks.end(), checks.begin(), checks.end());
    }
    return r;
}

}  // namespace regweight
