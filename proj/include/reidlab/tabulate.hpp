#pragma once

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "reidlab/model.hpp"

namespace reidlab {

enum class Fidelity { Full, CensusLike };

/// Tract-level single-year-of-age counts, one tract per table.
struct TractAgeTable {
    std::string tract;
    // (sex, age, race, ethnicity) -> count
    std::map<std::tuple<Sex, Age, Race, Ethnicity>, long> counts;

    long at(Sex s, Age a, Race r, Ethnicity e) const;
    long total() const;
};

/// Block-level grouped-age counts. The ethnicity component is absent on
/// non-White rows under CensusLike fidelity (both ethnicities pooled).
struct BlockGroupedTable {
    // (block, sex, age-group index, race, ethnicity or pooled) -> count
    std::map<std::tuple<std::string, Sex, int, Race, std::optional<Ethnicity>>, long> counts;

    long at(const std::string& block, Sex s, int group, Race r,
            std::optional<Ethnicity> e) const;
};

/// Block-level all-ages race-by-ethnicity counts (the P8/P9 role).
struct BlockRaceEthnicityTable {
    std::map<std::tuple<std::string, Race, Ethnicity>, long> counts;

    long at(const std::string& block, Race r, Ethnicity e) const;
};

struct ReleasedTables {
    TractAgeTable tract;
    BlockGroupedTable block_grouped;
    BlockRaceEthnicityTable block_race_eth;
    AgeGroupScheme scheme = AgeGroupScheme::default_scheme();
    Fidelity fidelity = Fidelity::Full;

    bool operator==(const ReleasedTables& other) const;
};

/// Exact tabulation, no disclosure-limitation noise. Under CensusLike the
/// block grouped-age rows for non-White races pool both ethnicities.
ReleasedTables tabulate(const Population& pop, Fidelity fidelity = Fidelity::Full);

/// Empty iff block counts add up to tract counts within every
/// (sex, race, ethnicity, age-group) and block_race_eth matches
/// block_grouped pooled over age groups.
std::vector<Violation> check_consistency(const ReleasedTables& tables);

}  // namespace reidlab
