#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "morsetower/category.hpp"
#include "morsetower/scenario.hpp"

namespace morse {

struct VerifyLine {
    std::string check;
    bool pass = false;
    std::string detail;
};

struct VerifySummary {
    std::string scenario;
    std::vector<VerifyLine> lines;
    bool all_pass() const {
        for (const auto& l : lines)
            if (!l.pass) return false;
        return true;
    }
    std::string to_text() const;
    const VerifyLine* find(const std::string& check) const;
};

struct VerifyOptions {
    std::string out_dir;               // artifacts written here when nonempty
    std::string dump_trajectories_dir; // witness CSVs when nonempty
    std::uint64_t seed = 7;
    double tol_scale = 1.0;
};

/// The full per-scenario pipeline: complex construction and d^2 = 0, GF(2)
/// homology, continuation / chain homotopy checks as the declared family
/// allows, boundary-stratum parities, induced homology maps.
VerifySummary verify_all(const Scenario& sc, const VerifyOptions& opt);

/// JSON helpers shared by the CLI; all output is deterministic.
std::string graded_map_json(const GradedMap& g);
std::string summary_json(const VerifySummary& s, const Tolerances& tol, std::uint64_t seed);
void write_text_file(const std::string& path, const std::string& content);

} // namespace morse
