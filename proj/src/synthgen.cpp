#include "reidlab/synthgen.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "reidlab/rng.hpp"

namespace reidlab {

namespace {

std::string cell_name(Sex s, Race r, Ethnicity e) {
    std::ostringstream os;
    os << to_string(s) << "/" << to_string(r) << "/" << to_string(e);
    return os.str();
}

}  // namespace

long PopulationSpec::total_persons() const {
    long total = 0;
    for (const auto& [cell, freq] : cell_age_freq)
        for (const auto& [age, count] : freq) total += count;
    return total;
}

Population generate_population(const PopulationSpec& spec, std::uint64_t seed) {
    // Validation.
    std::map<std::string, long> capacity;
    for (const auto& [block, size] : spec.blocks) {
        if (size <= 0)
            throw std::invalid_argument("block " + block + " has non-positive size");
        if (!capacity.emplace(block, size).second)
            throw std::invalid_argument("duplicate block code " + block);
    }
    long block_total = 0;
    for (const auto& [block, size] : capacity) block_total += size;

    std::map<std::tuple<Sex, Race, Ethnicity>, long> cell_totals;
    for (const auto& [cell, freq] : spec.cell_age_freq) {
        long total = 0;
        for (const auto& [age, count] : freq) {
            if (count < 0)
                throw std::invalid_argument("negative age frequency in cell " +
                                            cell_name(std::get<0>(cell), std::get<1>(cell),
                                                      std::get<2>(cell)));
            total += count;
        }
        cell_totals[cell] = total;
    }
    long person_total =
        std::accumulate(cell_totals.begin(), cell_totals.end(), 0L,
                        [](long acc, const auto& kv) { return acc + kv.second; });
    if (person_total != block_total)
        throw std::invalid_argument("demographic total " + std::to_string(person_total) +
                                    " does not match block capacity " +
                                    std::to_string(block_total));

    // Phase 1: pinned placements consume capacity first.
    // placements[cell][block] = count
    std::map<std::tuple<Sex, Race, Ethnicity>, std::map<std::string, long>> placements;
    std::map<std::tuple<Sex, Race, Ethnicity>, long> placed;
    for (const auto& [key, count] : spec.explicit_counts) {
        const auto& [block, sex, race, eth] = key;
        if (count < 0) throw std::invalid_argument("negative explicit count for block " + block);
        auto cap_it = capacity.find(block);
        if (cap_it == capacity.end())
            throw std::invalid_argument("explicit count names unknown block " + block);
        std::tuple cell{sex, race, eth};
        if (!cell_totals.contains(cell))
            throw std::invalid_argument("explicit count names absent cell " +
                                        cell_name(sex, race, eth));
        cap_it->second -= count;
        if (cap_it->second < 0)
            throw std::invalid_argument("cell " + cell_name(sex, race, eth) +
                                        ": explicit counts overflow block " + block);
        placements[cell][block] += count;
        placed[cell] += count;
        if (placed[cell] > cell_totals[cell])
            throw std::invalid_argument("cell " + cell_name(sex, race, eth) +
                                        ": explicit counts exceed tract total");
    }

    // Phase 2: remaining members land in blocks with probability
    // proportional to remaining capacity.
    for (const auto& [cell, total] : cell_totals) {
        long remaining = total - placed[cell];
        if (remaining == 0) continue;
        const auto& [sex, race, eth] = cell;
        SplitMix64 rng(stable_seed(seed, 0, "alloc/" + cell_name(sex, race, eth)));
        for (long i = 0; i < remaining; ++i) {
            long open = 0;
            for (const auto& [block, cap] : capacity) open += cap;
            long pick = static_cast<long>(rng.bounded(static_cast<std::uint64_t>(open)));
            for (auto& [block, cap] : capacity) {
                if (pick < cap) {
                    --cap;
                    ++placements[cell][block];
                    break;
                }
                pick -= cap;
            }
        }
    }

    // Phase 3: age assignment. A shuffled copy of each cell's tract-level
    // age vector is dealt to the cell's members in block order, which keeps
    // the tract marginal exact for every seed.
    Population pop;
    pop.scheme = spec.scheme;
    long next_id = 0;
    for (const auto& [cell, freq] : spec.cell_age_freq) {
        const auto& [sex, race, eth] = cell;
        std::vector<Age> ages;
        for (const auto& [age, count] : freq)
            for (long i = 0; i < count; ++i) ages.push_back(age);
        SplitMix64 rng(stable_seed(seed, 0, "ages/" + cell_name(sex, race, eth)));
        shuffle(ages, rng);

        std::size_t pos = 0;
        for (const auto& [block, count] : placements[cell]) {
            for (long i = 0; i < count; ++i, ++pos) {
                PersonRecord rec;
                rec.person_id = "P" + std::to_string(next_id++);
                rec.geo = {spec.tract, block};
                rec.sex = sex;
                rec.age = ages[pos];
                rec.race = race;
                rec.ethnicity = eth;
                pop.records.push_back(std::move(rec));
            }
        }
    }
    return pop;
}

namespace {

constexpr std::uint64_t kFixtureSeed = 0x501aa1;

PopulationSpec make_tract501_spec() {
    PopulationSpec spec;
    spec.tract = "5.01";

    // 87 blocks, 338 persons: 26 singletons, one 29-person block, blocks
    // 4000 (13), 4012 (10), 4026 (2), the seven Table-5 blocks at size 4,
    // and 50 filler blocks of sizes 2..7.
    for (int i = 0; i < 26; ++i) spec.blocks.emplace_back("1" + std::to_string(i + 181), 1);
    spec.blocks.emplace_back("2000", 29);
    static constexpr int kFillerSizes[] = {2, 3, 4, 5, 6, 7};
    for (int i = 0; i < 48; ++i)
        spec.blocks.emplace_back("20" + std::to_string(i + 10), kFillerSizes[i % 6]);
    spec.blocks.emplace_back("2058", 7);
    spec.blocks.emplace_back("2059", 7);
    for (const char* b : {"3014", "3017", "3019", "3021"}) spec.blocks.emplace_back(b, 4);
    spec.blocks.emplace_back("4000", 13);
    spec.blocks.emplace_back("4002", 4);
    spec.blocks.emplace_back("4003", 4);
    spec.blocks.emplace_back("4012", 10);
    spec.blocks.emplace_back("4021", 4);
    spec.blocks.emplace_back("4026", 2);

    // Tract-level single-year-of-age frequencies for Males 25-29, one map
    // per (race, ethnicity). The Asian/NotHispanic age-26 count is 3, not 4:
    // the published single-year column sums to 7 while every aggregate puts
    // the cell at 6 people and the tract slice at 338.
    using FM = std::map<Age, long>;
    auto cell = [&spec](Race r, Ethnicity e, FM freq) {
        spec.cell_age_freq[{Sex::Male, r, e}] = std::move(freq);
    };
    cell(Race::White, Ethnicity::NotHispanic, {{25, 39}, {26, 53}, {27, 56}, {28, 57}, {29, 58}});
    cell(Race::White, Ethnicity::Hispanic, {{25, 3}, {26, 6}, {27, 6}, {28, 9}, {29, 4}});
    cell(Race::Black, Ethnicity::NotHispanic, {{25, 1}, {26, 7}, {27, 2}, {28, 2}, {29, 1}});
    cell(Race::AIAN, Ethnicity::NotHispanic, {{26, 1}, {28, 1}, {29, 1}});
    cell(Race::AIAN, Ethnicity::Hispanic, {{25, 1}, {29, 1}});
    cell(Race::Asian, Ethnicity::NotHispanic, {{26, 3}, {27, 1}, {28, 1}, {29, 1}});
    cell(Race::NHPI, Ethnicity::NotHispanic, {{28, 1}});
    cell(Race::NHPI, Ethnicity::Hispanic, {{28, 1}});
    cell(Race::Other, Ethnicity::NotHispanic, {{26, 1}});
    cell(Race::Other, Ethnicity::Hispanic, {{25, 5}, {26, 1}, {27, 1}, {28, 1}, {29, 4}});
    cell(Race::TwoOrMore, Ethnicity::NotHispanic, {{25, 1}, {26, 1}, {28, 1}});
    cell(Race::TwoOrMore, Ethnicity::Hispanic, {{25, 1}, {28, 2}, {29, 2}});

    // Published block placements.
    auto pin = [&spec](const std::string& block, Race r, Ethnicity e, long n) {
        spec.explicit_counts[{block, Sex::Male, r, e}] = n;
    };
    // Black/NotHispanic distribution across blocks.
    for (const char* b : {"3014", "3017", "3019", "3021", "4002", "4003", "4021"})
        pin(b, Race::Black, Ethnicity::NotHispanic, 1);
    pin("4012", Race::Black, Ethnicity::NotHispanic, 4);
    pin("4026", Race::Black, Ethnicity::NotHispanic, 2);
    // Block 4000: 9 White/NotHispanic, 3 White/Hispanic, 1 Asian/NotHispanic.
    pin("4000", Race::White, Ethnicity::NotHispanic, 9);
    pin("4000", Race::White, Ethnicity::Hispanic, 3);
    pin("4000", Race::Asian, Ethnicity::NotHispanic, 1);
    // Block 4012: 4 White/NotHispanic, 1 AIAN/Hispanic, 1 White/Hispanic
    // alongside the 4 Black/NotHispanic pinned above.
    pin("4012", Race::White, Ethnicity::NotHispanic, 4);
    pin("4012", Race::AIAN, Ethnicity::Hispanic, 1);
    pin("4012", Race::White, Ethnicity::Hispanic, 1);
    // Every single-person block holds a White/NotHispanic man, and the
    // one-person demographic cells live in the large block.
    for (int i = 0; i < 26; ++i)
        pin("1" + std::to_string(i + 181), Race::White, Ethnicity::NotHispanic, 1);
    pin("2000", Race::NHPI, Ethnicity::NotHispanic, 1);
    pin("2000", Race::NHPI, Ethnicity::Hispanic, 1);
    pin("2000", Race::Other, Ethnicity::NotHispanic, 1);

    return spec;
}

}  // namespace

std::pair<Population, PopulationSpec> fixture_tract501() {
    PopulationSpec spec = make_tract501_spec();
    return {generate_population(spec, kFixtureSeed), spec};
}

}  // namespace reidlab
