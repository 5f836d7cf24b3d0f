// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include "evmg/core.hpp"

namespace evmg {

enum class ProfileKind { BaseLoad, PvProduction };

std::string_view to_string(ProfileKind kind);

/// Per-slot power in kW.
struct Profile {
    ProfileKind kind = ProfileKind::BaseLoad;
    std::vector<double> values;

    double at(int slot) const { return values.at(static_cast<std::size_t>(slot)); }

    friend bool operator==(const Profile&, const Profile&) = default;
};

/// Throws InvalidInput on wrong length or a negative/non-finite value.
void validate(const Profile& profile, const TimeGrid& grid);

} // namespace evmg
