#pragma once

#include <memory>
#include <string>

#include "morsetower/homotopy.hpp"

namespace testhelp {

// Stock scenario ingredients shared across the suites.

inline std::string deformed_sphere_expr() {
    return "z + 0.65*(exp(-6*((x-sin(0.8))^2+y^2+(z-cos(0.8))^2)) + "
           "exp(-6*((x+sin(0.8))^2+y^2+(z-cos(0.8))^2)))";
}

inline std::string tilted_torus_expr() { return "sin(0.3)*x + cos(0.3)*z"; }

// blend deformed -> round sphere with a transient symmetry-breaking term
inline std::string deformed_to_round_expr() {
    return "(" + deformed_sphere_expr() +
           ")*(1-smoothstep((t+1)/2)) + z*smoothstep((t+1)/2) + "
           "0.35*x*smoothstep((t+1)/2)*(1-smoothstep((t+1)/2))";
}

// moving-well family: pulls the transported point toward a target whose
// longitude sweeps across the stable arc of the saddle as s1 runs over [0,1]
inline std::string designed_family_expr() {
    return deformed_sphere_expr() +
           " + 1.6*smoothstep((t+0.9)/0.3)*smoothstep((0.9-t)/0.15)*("
           "(x - sin(0.45)*cos(0.35-0.72*s1))^2 + "
           "(y - sin(0.45)*sin(0.35-0.72*s1))^2 + "
           "(z - cos(0.45))^2)";
}

inline morse::Tolerances tols() { return morse::Tolerances{}; }

inline std::shared_ptr<const morse::MorseSmalePair> make_pair(
    std::shared_ptr<const morse::Surface> surf, const std::string& expr, int seeds = 9) {
    morse::ScalarField f = morse::ScalarField::parse(expr);
    return std::make_shared<const morse::MorseSmalePair>(
        morse::MorseSmalePair::build(std::move(surf), std::move(f), seeds, tols()));
}

inline std::shared_ptr<const morse::Surface> unit_sphere() {
    return std::make_shared<morse::Surface>(morse::Surface::sphere(1.0));
}

inline std::shared_ptr<const morse::Surface> stock_torus() {
    return std::make_shared<morse::Surface>(morse::Surface::torus(2.0, 1.0));
}

} // namespace testhelp
