#include "divaudit/menus.hpp"

#include <bit>

#include "divaudit/errors.hpp"

namespace divaudit {

int MenuFamilyConfig::effective_max_size() const {
    return max_size < 0 ? static_cast<int>(universe.size()) : max_size;
}

void MenuFamilyConfig::validate() const {
    if (universe.size() > 63) {
        throw ConfigError("universe too large for mask enumeration (max 63)");
    }
    if (min_size < 1) throw ConfigError("menu min_size must be at least 1");
    if (effective_max_size() > static_cast<int>(universe.size())) {
        throw ConfigError("menu max_size exceeds the universe");
    }
    std::uint64_t count = std::uint64_t{1} << universe.size();
    if (count > max_enumeration && !override_cap) {
        throw CapExceededError("menu enumeration cap exceeded; pass the override to proceed",
                               count, max_enumeration);
    }
}

std::vector<ScoredIndividual> menu_from_mask(const std::vector<ScoredIndividual>& universe,
                                             MenuMask mask) {
    std::vector<ScoredIndividual> menu;
    for (size_t i = 0; i < universe.size(); ++i) {
        if (mask >> i & 1) menu.push_back(universe[i]);
    }
    return menu;
}

std::vector<std::string> ids_from_mask(const std::vector<ScoredIndividual>& universe,
                                       MenuMask mask) {
    std::vector<std::string> ids;
    for (size_t i = 0; i < universe.size(); ++i) {
        if (mask >> i & 1) ids.push_back(universe[i].id);
    }
    return ids;
}

void for_each_menu(const MenuFamilyConfig& config, const std::function<void(MenuMask)>& fn) {
    config.validate();
    int lo = config.min_size;
    int hi = config.effective_max_size();
    if (lo > static_cast<int>(config.universe.size())) return;
    MenuMask end = MenuMask{1} << config.universe.size();
    for (MenuMask mask = 1; mask < end; ++mask) {
        int size = std::popcount(mask);
        if (size >= lo && size <= hi) fn(mask);
    }
}

std::vector<MenuMask> enumerate_menus(const MenuFamilyConfig& config) {
    std::vector<MenuMask> menus;
    for_each_menu(config, [&](MenuMask mask) { menus.push_back(mask); });
    return menus;
}

}  // namespace divaudit
