#include "reidlab/reconstruct.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "reidlab/rng.hpp"

namespace reidlab {

namespace {

long slot_total(const std::vector<std::pair<std::string, long>>& slots) {
    return std::accumulate(slots.begin(), slots.end(), 0L,
                           [](long acc, const auto& s) { return acc + s.second; });
}

std::string cell_key(const std::string& tract, Sex sex, int group, Race race,
                     const char* eth_token) {
    std::ostringstream os;
    os << tract << "/" << to_string(sex) << "/" << group << "/" << to_string(race) << "/"
       << eth_token;
    return os.str();
}

std::vector<Age> age_vector(const std::map<Age, long>& freq) {
    std::vector<Age> v;
    for (const auto& [age, count] : freq)
        for (long i = 0; i < count; ++i) v.push_back(age);
    return v;
}

}  // namespace

long CellProblem::total_slots() const { return slot_total(block_slots); }

std::string CellProblem::key_string() const {
    return cell_key(tract, sex, group, race, to_string(ethnicity).data());
}

long PooledCellProblem::total_slots() const { return slot_total(block_slots); }

std::string PooledCellProblem::key_string() const {
    return cell_key(tract, sex, group, race, "pooled");
}

Population Reconstruction::as_population(const AgeGroupScheme& scheme) const {
    Population pop;
    pop.scheme = scheme;
    pop.records.reserve(rows.size());
    for (const ReconRow& row : rows)
        pop.records.push_back({"R" + std::to_string(row.row_id),
                               {tract, row.block},
                               row.sex,
                               row.age,
                               row.race,
                               row.ethnicity});
    return pop;
}

CellSet build_cells(const ReleasedTables& tables) {
    if (auto violations = check_consistency(tables); !violations.empty())
        throw std::invalid_argument("inconsistent tables: " + violations.front().subject + ": " +
                                    violations.front().rule);

    CellSet out;

    // Tract-side age frequencies per (sex, group, race, ethnicity-or-pooled).
    std::map<std::tuple<Sex, int, Race, std::optional<Ethnicity>>,
             std::map<Ethnicity, std::map<Age, long>>>
        freqs;
    for (const auto& [key, count] : tables.tract.counts) {
        if (count == 0) continue;
        const auto& [sex, age, race, eth] = key;
        int group = tables.scheme.group_of(age);
        std::optional<Ethnicity> cell_eth = eth;
        if (tables.fidelity == Fidelity::CensusLike && race != Race::White)
            cell_eth = std::nullopt;
        freqs[{sex, group, race, cell_eth}][eth][age] += count;
    }

    // Block slots per cell, ascending block order courtesy of the map key.
    std::map<std::tuple<Sex, int, Race, std::optional<Ethnicity>>,
             std::vector<std::pair<std::string, long>>>
        slots;
    for (const auto& [key, count] : tables.block_grouped.counts) {
        if (count == 0) continue;
        const auto& [block, sex, group, race, eth] = key;
        slots[{sex, group, race, eth}].emplace_back(block, count);
    }

    for (auto& [key, by_eth] : freqs) {
        const auto& [sex, group, race, eth] = key;
        auto slot_it = slots.find(key);
        std::vector<std::pair<std::string, long>> cell_slots =
            slot_it == slots.end() ? std::vector<std::pair<std::string, long>>{}
                                   : slot_it->second;
        if (eth) {
            CellProblem cell;
            cell.tract = tables.tract.tract;
            cell.sex = sex;
            cell.group = group;
            cell.race = race;
            cell.ethnicity = *eth;
            cell.age_freq = by_eth.at(*eth);
            cell.block_slots = std::move(cell_slots);
            out.exact.push_back(std::move(cell));
        } else {
            PooledCellProblem cell;
            cell.tract = tables.tract.tract;
            cell.sex = sex;
            cell.group = group;
            cell.race = race;
            cell.age_freq = by_eth;
            cell.block_slots = std::move(cell_slots);
            out.pooled.push_back(std::move(cell));
        }
    }
    return out;
}

std::vector<Age> reconstruct_cell(const CellProblem& cell, std::uint64_t cell_seed) {
    std::vector<Age> ages = age_vector(cell.age_freq);
    if (static_cast<long>(ages.size()) != cell.total_slots())
        throw std::invalid_argument("cell " + cell.key_string() +
                                    ": age frequencies do not match slot total");
    SplitMix64 rng(cell_seed);
    shuffle(ages, rng);
    return ages;
}

std::vector<std::pair<Ethnicity, Age>> reconstruct_cell_censuslike(
    const PooledCellProblem& cell, std::uint64_t cell_seed) {
    long total = 0;
    std::vector<Ethnicity> labels;
    for (const auto& [eth, freq] : cell.age_freq)
        for (const auto& [age, count] : freq) {
            total += count;
            for (long i = 0; i < count; ++i) labels.push_back(eth);
        }
    if (total != cell.total_slots())
        throw std::invalid_argument("cell " + cell.key_string() +
                                    ": ethnicity split does not match slot total");

    SplitMix64 rng(cell_seed);
    shuffle(labels, rng);  // stage 1: ethnicity onto slots

    // stage 2: within each ethnicity, ages onto that ethnicity's slots
    std::map<Ethnicity, std::vector<Age>> ages;
    for (const auto& [eth, freq] : cell.age_freq) {
        ages[eth] = age_vector(freq);
        shuffle(ages[eth], rng);
    }

    std::vector<std::pair<Ethnicity, Age>> out;
    out.reserve(labels.size());
    std::map<Ethnicity, std::size_t> cursor;
    for (Ethnicity eth : labels) out.emplace_back(eth, ages[eth][cursor[eth]++]);
    return out;
}

namespace {

template <typename Cell, typename Assignment>
void append_rows(Reconstruction& recon, const Cell& cell, const Assignment& assignment,
                 Sex sex, Race race) {
    std::size_t pos = 0;
    for (const auto& [block, count] : cell.block_slots)
        for (long i = 0; i < count; ++i, ++pos) {
            ReconRow row;
            row.row_id = static_cast<int>(recon.rows.size());
            row.block = block;
            row.sex = sex;
            row.race = race;
            if constexpr (std::is_same_v<std::decay_t<decltype(assignment[0])>, Age>) {
                row.age = assignment[pos];
                row.ethnicity = cell.ethnicity;
            } else {
                row.ethnicity = assignment[pos].first;
                row.age = assignment[pos].second;
            }
            recon.rows.push_back(std::move(row));
        }
}

}  // namespace

Reconstruction reconstruct(const ReleasedTables& tables, std::uint64_t seed) {
    CellSet cells = build_cells(tables);

    // Canonical interleaving of exact and pooled cells by (sex, group, race):
    // per (sex, group, race) the cells are either all exact or one pooled,
    // so a merge on the shared prefix yields a total order.
    Reconstruction recon;
    recon.tract = tables.tract.tract;
    recon.seed = seed;

    std::size_t ei = 0, pi = 0;
    auto pooled_rank = [](const PooledCellProblem& c) {
        return std::tuple(c.sex, c.group, c.race);
    };
    while (ei < cells.exact.size() || pi < cells.pooled.size()) {
        bool take_exact;
        if (pi == cells.pooled.size())
            take_exact = true;
        else if (ei == cells.exact.size())
            take_exact = false;
        else {
            const auto& e = cells.exact[ei];
            take_exact = std::tuple(e.sex, e.group, e.race) <= pooled_rank(cells.pooled[pi]);
        }
        if (take_exact) {
            const CellProblem& cell = cells.exact[ei++];
            auto ages = reconstruct_cell(cell, stable_seed(seed, 0, cell.key_string()));
            append_rows(recon, cell, ages, cell.sex, cell.race);
        } else {
            const PooledCellProblem& cell = cells.pooled[pi++];
            auto pairs =
                reconstruct_cell_censuslike(cell, stable_seed(seed, 0, cell.key_string()));
            append_rows(recon, cell, pairs, cell.sex, cell.race);
        }
    }
    return recon;
}

std::vector<Reconstruction> reconstruct_batch(const ReleasedTables& tables,
                                              std::uint64_t base_seed, int runs) {
    if (runs < 1) throw std::invalid_argument("runs must be >= 1");
    std::vector<Reconstruction> out;
    out.reserve(static_cast<std::size_t>(runs));
    for (int i = 0; i < runs; ++i) {
        std::uint64_t run_seed = stable_seed(base_seed, static_cast<std::uint64_t>(i), "run");
        Reconstruction recon = reconstruct(tables, run_seed);
        recon.index = i;
        out.push_back(std::move(recon));
    }
    return out;
}

AssignmentCount count_assignments(const CellProblem& cell) {
    long n = cell.total_slots();
    AssignmentCount result = 1;
    for (long i = 2; i <= n; ++i) result *= i;
    for (const auto& [age, count] : cell.age_freq)
        for (long i = 2; i <= count; ++i) result /= i;
    return result;
}

AssignmentCount count_partial(long n, long k) {
    if (k < 0 || k > n) throw std::domain_error("count_partial requires 0 <= k <= n");
    if (k > n - k) k = n - k;
    AssignmentCount result = 1;
    for (long i = 1; i <= k; ++i) {
        result *= (n - k + i);
        result /= i;  // exact: C(n-k+i, i) is integral at every step
    }
    return result;
}

std::vector<std::vector<Age>> enumerate_assignments(const CellProblem& cell,
                                                    const AssignmentCount& limit) {
    AssignmentCount count = count_assignments(cell);
    if (count > limit)
        throw std::length_error("cell " + cell.key_string() + " has " + count.str() +
                                " assignments, above the enumeration limit " + limit.str());
    std::vector<Age> ages;
    for (const auto& [age, c] : cell.age_freq)
        for (long i = 0; i < c; ++i) ages.push_back(age);

    std::vector<std::vector<Age>> out;
    out.reserve(static_cast<std::size_t>(count));
    do {
        out.push_back(ages);
    } while (std::next_permutation(ages.begin(), ages.end()));
    return out;
}

}  // namespace reidlab
