#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace fundalloc {

// The four sectors, in canonical order. All weight/exposure vectors across
// the project are indexed in this order.
enum class SectorId : int {
    Technology = 0,
    Healthcare = 1,
    Finance = 2,
    Energy = 3,
};

inline constexpr int kNumSectors = 4;

inline constexpr std::array<SectorId, kNumSectors> kSectorOrder = {
    SectorId::Technology,
    SectorId::Healthcare,
    SectorId::Finance,
    SectorId::Energy,
};

const char* sector_name(SectorId id);
std::optional<SectorId> sector_from_name(const std::string& name);

enum class RiskLevel : int {
    Low = 0,
    Medium = 1,
    High = 2,
};

const char* risk_level_name(RiskLevel level);
std::optional<RiskLevel> risk_level_from_name(const std::string& name);

// Calendar month, rendered as "YYYY-MM".
struct YearMonth {
    int year = 1970;
    int month = 1;  // 1..12

    auto operator<=>(const YearMonth&) const = default;

    YearMonth next() const {
        return month == 12 ? YearMonth{year + 1, 1} : YearMonth{year, month + 1};
    }

    std::string to_string() const;
    static std::optional<YearMonth> parse(const std::string& text);
};

}  // namespace fundalloc
