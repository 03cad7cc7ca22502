#include "reidlab/model.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace reidlab {

std::string_view to_string(Sex s) {
    switch (s) {
        case Sex::Male: return "Male";
        case Sex::Female: return "Female";
    }
    throw std::logic_error("bad Sex value");
}

std::string_view to_string(Race r) {
    switch (r) {
        case Race::White: return "White";
        case Race::Black: return "Black";
        case Race::AIAN: return "AIAN";
        case Race::Asian: return "Asian";
        case Race::NHPI: return "NHPI";
        case Race::Other: return "Other";
        case Race::TwoOrMore: return "TwoOrMore";
    }
    throw std::logic_error("bad Race value");
}

std::string_view to_string(Ethnicity e) {
    switch (e) {
        case Ethnicity::Hispanic: return "Hispanic";
        case Ethnicity::NotHispanic: return "NotHispanic";
    }
    throw std::logic_error("bad Ethnicity value");
}

Sex sex_from_string(std::string_view token) {
    for (Sex s : kAllSexes)
        if (to_string(s) == token) return s;
    throw std::invalid_argument("unknown sex token: " + std::string(token));
}

Race race_from_string(std::string_view token) {
    for (Race r : kAllRaces)
        if (to_string(r) == token) return r;
    throw std::invalid_argument("unknown race token: " + std::string(token));
}

Ethnicity ethnicity_from_string(std::string_view token) {
    for (Ethnicity e : kAllEthnicities)
        if (to_string(e) == token) return e;
    throw std::invalid_argument("unknown ethnicity token: " + std::string(token));
}

AgeGroupScheme::AgeGroupScheme(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
    if (ranges_.empty()) throw std::invalid_argument("age scheme must have at least one range");
    if (ranges_.front().lo != 0) throw std::invalid_argument("age scheme must start at 0");
    for (std::size_t i = 0; i < ranges_.size(); ++i) {
        if (ranges_[i].lo > ranges_[i].hi)
            throw std::invalid_argument("age range lo > hi");
        if (i > 0 && ranges_[i].lo != ranges_[i - 1].hi + 1)
            throw std::invalid_argument("age ranges must be contiguous and ascending");
    }
}

AgeGroupScheme AgeGroupScheme::default_scheme() {
    return AgeGroupScheme({{0, 4},   {5, 9},   {10, 14}, {15, 17}, {18, 19}, {20, 20},
                           {21, 21}, {22, 24}, {25, 29}, {30, 34}, {35, 39}, {40, 44},
                           {45, 49}, {50, 54}, {55, 59}, {60, 61}, {62, 64}, {65, 66},
                           {67, 69}, {70, 74}, {75, 79}, {80, 84}, {85, kMaxAge}});
}

int AgeGroupScheme::group_of(Age age) const {
    if (age < 0 || age > max_age())
        throw std::domain_error("age " + std::to_string(age) + " outside scheme domain [0, " +
                                std::to_string(max_age()) + "]");
    auto it = std::upper_bound(ranges_.begin(), ranges_.end(), age,
                               [](Age a, const Range& r) { return a < r.lo; });
    return static_cast<int>(std::distance(ranges_.begin(), it)) - 1;
}

std::string AgeGroupScheme::label(int group) const {
    const Range& r = ranges_.at(static_cast<std::size_t>(group));
    return std::to_string(r.lo) + "-" + std::to_string(r.hi);
}

std::optional<int> AgeGroupScheme::group_from_label(std::string_view label) const {
    for (std::size_t i = 0; i < ranges_.size(); ++i)
        if (this->label(static_cast<int>(i)) == label) return static_cast<int>(i);
    return std::nullopt;
}

int age_group_of(Age age, const AgeGroupScheme& scheme) { return scheme.group_of(age); }

std::vector<Violation> validate_population(const Population& pop) {
    std::vector<Violation> out;
    std::unordered_set<std::string> seen_ids;
    std::unordered_map<std::string, std::string> block_tract;  // block -> tract
    for (const PersonRecord& rec : pop.records) {
        if (!seen_ids.insert(rec.person_id).second)
            out.push_back({rec.person_id, "duplicate person_id"});
        if (rec.age < 0 || rec.age > pop.scheme.max_age())
            out.push_back({rec.person_id, "age out of range: " + std::to_string(rec.age)});
        if (rec.geo.tract.empty() || rec.geo.block.empty())
            out.push_back({rec.person_id, "empty geography code"});
        auto [it, inserted] = block_tract.emplace(rec.geo.block, rec.geo.tract);
        if (!inserted && it->second != rec.geo.tract)
            out.push_back({rec.person_id, "block " + rec.geo.block + " appears in two tracts"});
    }
    return out;
}

}  // namespace reidlab
