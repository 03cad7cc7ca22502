#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace reidlab {

enum class Sex : std::uint8_t { Male, Female };

enum class Race : std::uint8_t { White, Black, AIAN, Asian, NHPI, Other, TwoOrMore };

enum class Ethnicity : std::uint8_t { Hispanic, NotHispanic };

inline constexpr std::array<Sex, 2> kAllSexes{Sex::Male, Sex::Female};
inline constexpr std::array<Race, 7> kAllRaces{Race::White, Race::Black,  Race::AIAN, Race::Asian,
                                               Race::NHPI,  Race::Other, Race::TwoOrMore};
inline constexpr std::array<Ethnicity, 2> kAllEthnicities{Ethnicity::Hispanic,
                                                          Ethnicity::NotHispanic};

std::string_view to_string(Sex s);
std::string_view to_string(Race r);
std::string_view to_string(Ethnicity e);

Sex sex_from_string(std::string_view token);
Race race_from_string(std::string_view token);
Ethnicity ethnicity_from_string(std::string_view token);

/// tract + block code pair; blocks are unique within their tract.
struct GeoId {
    std::string tract;
    std::string block;

    auto operator<=>(const GeoId&) const = default;
};

using Age = int;

inline constexpr Age kMaxAge = 114;

/// Ordered disjoint inclusive age ranges covering [0, max_age].
class AgeGroupScheme {
  public:
    struct Range {
        Age lo;
        Age hi;
        auto operator<=>(const Range&) const = default;
    };

    explicit AgeGroupScheme(std::vector<Range> ranges);

    /// The 23-bin P12-style scheme: 0-4, 5-9, ..., 20 and 21 as singletons,
    /// ..., 85-max.
    static AgeGroupScheme default_scheme();

    const std::vector<Range>& ranges() const { return ranges_; }
    std::size_t size() const { return ranges_.size(); }
    Age max_age() const { return ranges_.back().hi; }

    /// Index of the unique bin containing `age`; throws std::domain_error
    /// when age lies outside the scheme.
    int group_of(Age age) const;

    /// "lo-hi" label used in block-table CSVs.
    std::string label(int group) const;
    std::optional<int> group_from_label(std::string_view label) const;

    bool operator==(const AgeGroupScheme&) const = default;

  private:
    std::vector<Range> ranges_;
};

struct PersonRecord {
    std::string person_id;
    GeoId geo;
    Sex sex = Sex::Male;
    Age age = 0;
    Race race = Race::White;
    Ethnicity ethnicity = Ethnicity::NotHispanic;

    bool operator==(const PersonRecord&) const = default;
};

struct Population {
    std::vector<PersonRecord> records;
    AgeGroupScheme scheme = AgeGroupScheme::default_scheme();
};

struct Violation {
    std::string subject;  // person_id or table key
    std::string rule;
};

int age_group_of(Age age, const AgeGroupScheme& scheme);

/// Empty result iff all record invariants hold (ids unique, ages in range,
/// block codes consistent across tracts).
std::vector<Violation> validate_population(const Population& pop);

}  // namespace reidlab
