#pragma once

#include <memory>
#include <optional>
#include <string>

#include "morsetower/homotopy.hpp"

namespace morse {

/// Parsed scenario file: surface + functions + optional homotopy family.
/// Validation is strict; unknown keys are rejected before any numeric work.
struct Scenario {
    std::string name;
    std::shared_ptr<Surface> surface;
    std::string f_alpha_text, f_beta_text;
    bool has_beta = false;
    int seeds_per_chart = 9;

    struct Family {
        int ell = 0;
        double cutoff = 1.0;
        std::string kind = "expr"; // "expr" | "constant"
        std::string expr_text;
        bool constant_in_s = false;
        std::string designed_source, designed_target; // optional designed pair
    };
    std::optional<Family> family;
    Tolerances tol;

    static Scenario load_file(const std::string& path);
    static Scenario parse_text(const std::string& text);

    std::shared_ptr<const MorseSmalePair> make_alpha() const;
    std::shared_ptr<const MorseSmalePair> make_beta() const;
    /// Builds the declared family over freshly built end pairs.
    ParamHomotopy make_family(std::shared_ptr<const MorseSmalePair> alpha,
                              std::shared_ptr<const MorseSmalePair> beta) const;
};

} // namespace morse
