#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "nlab/report.hpp"

namespace nlab {

// One randomized property check: `cases` instances evaluated, `failures` of
// them violated the property, `worst` is the largest violation observed
// (relative unless noted in the name).
struct SuiteCheck {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::size_t skipped = 0;  // divergent or otherwise not applicable
    double worst = 0.0;

    bool passed() const noexcept { return cases > 0 && failures == 0; }
};

// I = I^{O1 O1} + I^{O2 O2} + I^{O1 O2} + I^{O2 O1}, invariance of the two
// diagonal blocks under polarization, and defect = (I(u^H) - I(u)) / 2.
std::vector<SuiteCheck> decomposition_suite(std::size_t functions, std::size_t half_spaces, std::uint64_t seed);

// D^H <= 0 on A x B for every Young function of the menu, and the monotonicity
// of the weighted Young functional.
std::vector<SuiteCheck> young_suite(std::size_t trials, std::uint64_t seed);

// Gagliardo seminorm under polarization and Schwarz rearrangement, u >= 0.
std::vector<SuiteCheck> gagliardo_suite(std::size_t trials, std::uint64_t seed);

// Multiset preservation, idempotence, equimeasurability, L^p contraction.
std::vector<SuiteCheck> structural_suite(std::size_t trials, std::uint64_t seed);

// Pointwise decay bounds for radially decreasing data and the tail estimate.
std::vector<SuiteCheck> decay_bound_suite(std::size_t trials, std::uint64_t seed);

// All of the above; one row per check.
StudyReport inequality_suite(std::size_t trials, std::uint64_t seed);

}  // namespace nlab
