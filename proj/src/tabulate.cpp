#include "reidlab/tabulate.hpp"

#include <numeric>
#include <set>
#include <sstream>

namespace reidlab {

namespace {

std::optional<Ethnicity> grouped_eth(Race race, Ethnicity eth, Fidelity fidelity) {
    if (fidelity == Fidelity::CensusLike && race != Race::White) return std::nullopt;
    return eth;
}

std::string key_str(Sex s, Race r, std::optional<Ethnicity> e) {
    std::ostringstream os;
    os << to_string(s) << "/" << to_string(r) << "/" << (e ? to_string(*e) : "pooled");
    return os.str();
}

}  // namespace

long TractAgeTable::at(Sex s, Age a, Race r, Ethnicity e) const {
    auto it = counts.find({s, a, r, e});
    return it == counts.end() ? 0 : it->second;
}

long TractAgeTable::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0L,
                           [](long acc, const auto& kv) { return acc + kv.second; });
}

long BlockGroupedTable::at(const std::string& block, Sex s, int group, Race r,
                           std::optional<Ethnicity> e) const {
    auto it = counts.find({block, s, group, r, e});
    return it == counts.end() ? 0 : it->second;
}

long BlockRaceEthnicityTable::at(const std::string& block, Race r, Ethnicity e) const {
    auto it = counts.find({block, r, e});
    return it == counts.end() ? 0 : it->second;
}

bool ReleasedTables::operator==(const ReleasedTables& other) const {
    return tract.tract == other.tract.tract && tract.counts == other.tract.counts &&
           block_grouped.counts == other.block_grouped.counts &&
           block_race_eth.counts == other.block_race_eth.counts && scheme == other.scheme &&
           fidelity == other.fidelity;
}

ReleasedTables tabulate(const Population& pop, Fidelity fidelity) {
    ReleasedTables out;
    out.scheme = pop.scheme;
    out.fidelity = fidelity;
    if (!pop.records.empty()) out.tract.tract = pop.records.front().geo.tract;

    for (const PersonRecord& rec : pop.records) {
        if (rec.geo.tract != out.tract.tract)
            throw std::invalid_argument("tabulate expects a single-tract population, got " +
                                        out.tract.tract + " and " + rec.geo.tract);
        ++out.tract.counts[{rec.sex, rec.age, rec.race, rec.ethnicity}];
        int group = pop.scheme.group_of(rec.age);
        ++out.block_grouped.counts[{rec.geo.block, rec.sex, group, rec.race,
                                    grouped_eth(rec.race, rec.ethnicity, fidelity)}];
        ++out.block_race_eth.counts[{rec.geo.block, rec.race, rec.ethnicity}];
    }
    return out;
}

std::vector<Violation> check_consistency(const ReleasedTables& tables) {
    std::vector<Violation> out;

    for (const auto& [key, count] : tables.tract.counts)
        if (count < 0) out.push_back({"tract table", "negative count"});
    for (const auto& [key, count] : tables.block_grouped.counts)
        if (count < 0) out.push_back({"block grouped table", "negative count"});
    for (const auto& [key, count] : tables.block_race_eth.counts)
        if (count < 0) out.push_back({"block race/ethnicity table", "negative count"});

    // (a) block grouped-age counts add up to the tract counts over each
    // (sex, race, ethnicity or pooled, age-group) slice.
    std::map<std::tuple<Sex, int, Race, std::optional<Ethnicity>>, long> tract_by_group;
    for (const auto& [key, count] : tables.tract.counts) {
        const auto& [sex, age, race, eth] = key;
        int group = tables.scheme.group_of(age);
        tract_by_group[{sex, group, race, grouped_eth(race, eth, tables.fidelity)}] += count;
    }
    std::map<std::tuple<Sex, int, Race, std::optional<Ethnicity>>, long> block_by_group;
    for (const auto& [key, count] : tables.block_grouped.counts) {
        const auto& [block, sex, group, race, eth] = key;
        block_by_group[{sex, group, race, eth}] += count;
    }
    for (const auto& [key, tract_count] : tract_by_group) {
        const auto& [sex, group, race, eth] = key;
        auto it = block_by_group.find(key);
        long block_count = it == block_by_group.end() ? 0 : it->second;
        if (block_count != tract_count)
            out.push_back({key_str(sex, race, eth) + " group " + tables.scheme.label(group),
                           "block sum " + std::to_string(block_count) + " != tract total " +
                               std::to_string(tract_count)});
    }
    for (const auto& [key, block_count] : block_by_group) {
        if (block_count != 0 && !tract_by_group.contains(key)) {
            const auto& [sex, group, race, eth] = key;
            out.push_back({key_str(sex, race, eth) + " group " + tables.scheme.label(group),
                           "block rows with no tract counterpart"});
        }
    }

    // (b) block race/ethnicity table equals block grouped pooled over age
    // groups (and over ethnicity where the grouped rows are pooled).
    std::map<std::tuple<std::string, Race, std::optional<Ethnicity>>, long> grouped_pooled;
    for (const auto& [key, count] : tables.block_grouped.counts) {
        const auto& [block, sex, group, race, eth] = key;
        grouped_pooled[{block, race, eth}] += count;
    }
    std::map<std::tuple<std::string, Race, std::optional<Ethnicity>>, long> re_pooled;
    for (const auto& [key, count] : tables.block_race_eth.counts) {
        const auto& [block, race, eth] = key;
        re_pooled[{block, race, grouped_eth(race, eth, tables.fidelity)}] += count;
    }
    for (const auto& [key, count] : grouped_pooled) {
        auto it = re_pooled.find(key);
        long other = it == re_pooled.end() ? 0 : it->second;
        if (other != count) {
            const auto& [block, race, eth] = key;
            out.push_back({"block " + block + " " + std::string(to_string(race)),
                           "grouped total " + std::to_string(count) +
                               " != race/ethnicity total " + std::to_string(other)});
        }
    }
    for (const auto& [key, count] : re_pooled) {
        if (count != 0 && !grouped_pooled.contains(key)) {
            const auto& [block, race, eth] = key;
            out.push_back({"block " + block + " " + std::string(to_string(race)),
                           "race/ethnicity rows with no grouped counterpart"});
        }
    }

    return out;
}

}  // namespace reidlab
