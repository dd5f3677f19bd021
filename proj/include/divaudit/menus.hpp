#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "divaudit/model.hpp"

namespace divaudit {

// Which subsets of the universe count as menus for an audit. The audit
// verdict is always relative to this family.
struct MenuFamilyConfig {
    std::vector<ScoredIndividual> universe;
    int min_size = 1;
    int max_size = -1;  // -1: |universe|
    // Hard cap on 2^|universe| enumerations; audits of larger universes
    // need the explicit override.
    std::uint64_t max_enumeration = std::uint64_t{1} << 14;
    bool override_cap = false;

    int effective_max_size() const;
    void validate() const;  // throws CapExceededError / ConfigError
};

using MenuMask = std::uint64_t;

std::vector<ScoredIndividual> menu_from_mask(const std::vector<ScoredIndividual>& universe,
                                             MenuMask mask);
std::vector<std::string> ids_from_mask(const std::vector<ScoredIndividual>& universe,
                                       MenuMask mask);

// Deterministic stream: masks in ascending numeric order, filtered to the
// configured size bounds.
void for_each_menu(const MenuFamilyConfig& config, const std::function<void(MenuMask)>& fn);

std::vector<MenuMask> enumerate_menus(const MenuFamilyConfig& config);

}  // namespace divaudit
