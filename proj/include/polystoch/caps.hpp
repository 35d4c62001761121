#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace polystoch {

// Thrown by capped searches that cannot finish within their node budget.
// Callers that promise a tri-state answer catch it and report "undecided".
struct CapExceeded : std::runtime_error {
    explicit CapExceeded(const std::string& what) : std::runtime_error(what) {}
};

// Node-expansion budgets for the capped searches. POLYSTOCH_CAP, when set,
// overrides every cap with the same value.
struct Caps {
    std::int64_t species_nodes = 10'000'000;
    std::int64_t permanent_s_nodes = 100'000'000;
    std::int64_t cover_nodes = 100'000'000;
    std::int64_t enumeration_nodes = 100'000'000;
};

Caps& caps();

// Counts expansions against a budget and throws CapExceeded past it.
class CapCounter {
public:
    CapCounter(std::int64_t budget, std::string label)
        : budget_(budget), label_(std::move(label)) {}

    void tick() {
        if (++used_ > budget_) throw CapExceeded(label_ + ": node cap exceeded (" +
                                                 std::to_string(budget_) + ")");
    }

    std::int64_t used() const { return used_; }

private:
    std::int64_t used_ = 0;
    std::int64_t budget_;
    std::string label_;
};

} // namespace polystoch
