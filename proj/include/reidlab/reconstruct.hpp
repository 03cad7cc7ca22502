#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reidlab/tabulate.hpp"

namespace reidlab {

using AssignmentCount = boost::multiprecision::cpp_int;

/// One independent reconstruction unit: the tract-level age frequency
/// vector for a (sex, age-group, race, ethnicity) slice plus the per-block
/// slot counts it must fill.
struct CellProblem {
    std::string tract;
    Sex sex = Sex::Male;
    int group = 0;
    Race race = Race::White;
    Ethnicity ethnicity = Ethnicity::NotHispanic;
    std::map<Age, long> age_freq;
    std::vector<std::pair<std::string, long>> block_slots;  // ascending block code

    long total_slots() const;
    std::string key_string() const;
};

/// CensusLike non-White cell: block rows pool both ethnicities, so the
/// age frequencies are carried per ethnicity from the tract table and the
/// ethnicity labels themselves have to be assigned to slots.
struct PooledCellProblem {
    std::string tract;
    Sex sex = Sex::Male;
    int group = 0;
    Race race = Race::White;
    std::map<Ethnicity, std::map<Age, long>> age_freq;
    std::vector<std::pair<std::string, long>> block_slots;

    long total_slots() const;
    std::string key_string() const;
};

struct CellSet {
    std::vector<CellProblem> exact;
    std::vector<PooledCellProblem> pooled;  // empty under Full fidelity
};

struct ReconRow {
    int row_id = 0;
    std::string block;
    Sex sex = Sex::Male;
    Age age = 0;
    Race race = Race::White;
    Ethnicity ethnicity = Ethnicity::NotHispanic;

    auto operator<=>(const ReconRow&) const = default;
};

struct Reconstruction {
    std::string tract;
    std::vector<ReconRow> rows;
    std::uint64_t seed = 0;
    int index = 0;

    Population as_population(const AgeGroupScheme& scheme) const;
};

/// Decompose consistent tables into independent cell problems, in canonical
/// (sex, age-group, race, ethnicity) order. Throws std::invalid_argument on
/// inconsistent tables, naming the first violated constraint.
CellSet build_cells(const ReleasedTables& tables);

/// Shuffle the cell's tract-level age vector onto its slots; returns one age
/// per slot in block_slots order. Deterministic in (cell, cell_seed) and
/// uniform over labeled assignments.
std::vector<Age> reconstruct_cell(const CellProblem& cell, std::uint64_t cell_seed);

/// Two-stage shuffle for pooled cells: ethnicity labels first, then each
/// ethnicity's age vector onto its slots.
std::vector<std::pair<Ethnicity, Age>> reconstruct_cell_censuslike(
    const PooledCellProblem& cell, std::uint64_t cell_seed);

Reconstruction reconstruct(const ReleasedTables& tables, std::uint64_t seed);

std::vector<Reconstruction> reconstruct_batch(const ReleasedTables& tables,
                                              std::uint64_t base_seed, int runs);

/// Number of distinct labeled-slot assignments: n! / prod(n_age!).
AssignmentCount count_assignments(const CellProblem& cell);

/// Exact binomial coefficient C(n, k).
AssignmentCount count_partial(long n, long k);

/// All distinct assignments in lexicographic order. Refuses (throws
/// std::length_error carrying the count) when count_assignments exceeds
/// `limit`. Test oracle; desk-scale cells only.
std::vector<std::vector<Age>> enumerate_assignments(const CellProblem& cell,
                                                    const AssignmentCount& limit = 1000000);

}  // namespace reidlab
