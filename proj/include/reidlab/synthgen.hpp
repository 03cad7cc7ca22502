#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "reidlab/model.hpp"

namespace reidlab {

/// Recipe for a hypothetical ground-truth population of one tract.
///
/// Tract-level demographics are exact: for each (sex, race, ethnicity) the
/// generated population reproduces `cell_age_freq` verbatim. Block placement
/// is random (proportional to remaining block capacity) except where
/// `explicit_counts` pins the number of a cell's members in a block.
struct PopulationSpec {
    std::string tract;
    std::vector<std::pair<std::string, long>> blocks;  // (code, size)
    std::map<std::tuple<Sex, Race, Ethnicity>, std::map<Age, long>> cell_age_freq;
    std::map<std::tuple<std::string, Sex, Race, Ethnicity>, long> explicit_counts;
    AgeGroupScheme scheme = AgeGroupScheme::default_scheme();

    long total_persons() const;
};

/// Deterministic in (spec, seed). Throws std::invalid_argument when the spec
/// is infeasible (explicit counts exceeding cell totals or block capacity,
/// block sizes not matching the demographic total), naming the cell.
Population generate_population(const PopulationSpec& spec, std::uint64_t seed);

/// The paper-pinned Males-25-to-29 slice of Tract 5.01, Laramie County WY:
/// 338 persons in 87 blocks. Tract-level single-year age frequencies, the
/// Black/NotHispanic block placement, and the composition of blocks 4000 and
/// 4012 follow the published tables; everything else is frozen by an
/// internal seed.
std::pair<Population, PopulationSpec> fixture_tract501();

}  // namespace reidlab
