#include "fundalloc/types.hpp"

#include <cstdio>

namespace fundalloc {

const char* error_kind_name_impl(int);  // forward decl placeholder, see error.cpp

const char* sector_name(SectorId id) {
    switch (id) {
        case SectorId::Technology: return "Technology";
        case SectorId::Healthcare: return "Healthcare";
        case SectorId::Finance: return "Finance";
        case SectorId::Energy: return "Energy";
    }
    return "?";
}

std::optional<SectorId> sector_from_name(const std::string& name) {
    for (SectorId id : kSectorOrder) {
        if (name == sector_name(id)) return id;
    }
    return std::nullopt;
}

const char* risk_level_name(RiskLevel level) {
    switch (level) {
        case RiskLevel::Low: return "Low";
        case RiskLevel::Medium: return "Medium";
        case RiskLevel::High: return "High";
    }
    return "?";
}

std::optional<RiskLevel> risk_level_from_name(const std::string& name) {
    for (RiskLevel level : {RiskLevel::Low, RiskLevel::Medium, RiskLevel::High}) {
        if (name == risk_level_name(level)) return level;
    }
    return std::nullopt;
}

std::string YearMonth::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", year, month);
    return buf;
}

std::optional<YearMonth> YearMonth::parse(const std::string& text) {
    if (text.size() != 7 || text[4] != '-') return std::nullopt;
    for (int i : {0, 1, 2, 3, 5, 6}) {
        if (text[i] < '0' || text[i] > '9') return std::nullopt;
    }
    YearMonth ym;
    ym.year = std::stoi(text.substr(0, 4));
    ym.month = std::stoi(text.substr(5, 2));
    if (ym.month < 1 || ym.month > 12) return std::nullopt;
    return ym;
}

}  // namespace fundalloc
