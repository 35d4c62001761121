#pragma once

#include <string>
#include <vector>

namespace polystoch {

struct ClaimResult {
    std::string id;
    bool pass = false;
    double seconds = 0.0;
    std::vector<std::string> details; // exact values, one line each
};

struct ClaimInfo {
    std::string id;
    std::string summary;
};

// Reproducible desk-scale checks, one per acceptance criterion.
const std::vector<ClaimInfo>& claim_list();

ClaimResult run_claim(const std::string& id);

} // namespace polystoch
