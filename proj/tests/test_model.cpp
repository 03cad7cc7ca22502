#include <doctest.h>

#include "reidlab/model.hpp"

using namespace reidlab;

TEST_CASE("default scheme has 23 bins with singleton 20 and 21") {
    auto scheme = AgeGroupScheme::default_scheme();
    CHECK(scheme.size() == 23);
    CHECK(scheme.ranges()[5] == AgeGroupScheme::Range{20, 20});
    CHECK(scheme.ranges()[6] == AgeGroupScheme::Range{21, 21});
    CHECK(scheme.max_age() == 114);
}

TEST_CASE("every age falls in exactly one bin and grouping is monotone") {
    auto scheme = AgeGroupScheme::default_scheme();
    int prev = 0;
    for (Age a = 0; a <= scheme.max_age(); ++a) {
        int g = age_group_of(a, scheme);
        const auto& r = scheme.ranges()[static_cast<std::size_t>(g)];
        CHECK(r.lo <= a);
        CHECK(a <= r.hi);
        CHECK(g >= prev);
        prev = g;
    }
}

TEST_CASE("age_group_of pinned examples") {
    auto scheme = AgeGroupScheme::default_scheme();
    CHECK(age_group_of(0, scheme) == 0);
    int g20 = age_group_of(20, scheme);
    CHECK(scheme.ranges()[static_cast<std::size_t>(g20)] == AgeGroupScheme::Range{20, 20});
    int g27 = age_group_of(27, scheme);
    CHECK(scheme.ranges()[static_cast<std::size_t>(g27)] == AgeGroupScheme::Range{25, 29});
    CHECK_THROWS_AS(age_group_of(115, scheme), std::domain_error);
    CHECK_THROWS_AS(age_group_of(-1, scheme), std::domain_error);
}

TEST_CASE("scheme construction rejects gaps and disorder") {
    using R = AgeGroupScheme::Range;
    CHECK_THROWS_AS(AgeGroupScheme({R{0, 4}, R{6, 9}}), std::invalid_argument);
    CHECK_THROWS_AS(AgeGroupScheme({R{0, 4}, R{3, 9}}), std::invalid_argument);
    CHECK_THROWS_AS(AgeGroupScheme({}), std::invalid_argument);
}

TEST_CASE("enum token round-trip") {
    for (Race r : kAllRaces) CHECK(race_from_string(to_string(r)) == r);
    for (Sex s : kAllSexes) CHECK(sex_from_string(to_string(s)) == s);
    for (Ethnicity e : kAllEthnicities) CHECK(ethnicity_from_string(to_string(e)) == e);
    CHECK_THROWS_AS(race_from_string("Martian"), std::invalid_argument);
}

TEST_CASE("validate_population") {
    Population pop;
    pop.records = {
        {"P1", {"5.01", "1001"}, Sex::Male, 25, Race::White, Ethnicity::NotHispanic},
        {"P2", {"5.01", "1001"}, Sex::Female, 60, Race::Black, Ethnicity::Hispanic},
        {"P3", {"5.01", "1002"}, Sex::Male, 0, Race::Asian, Ethnicity::NotHispanic},
    };
    CHECK(validate_population(pop).empty());

    SUBCASE("duplicate id") {
        pop.records[2].person_id = "P1";
        auto v = validate_population(pop);
        REQUIRE(v.size() == 1);
        CHECK(v[0].subject == "P1");
    }
    SUBCASE("age out of range") {
        pop.records[1].age = 200;
        auto v = validate_population(pop);
        REQUIRE(v.size() == 1);
        CHECK(v[0].rule.find("out of range") != std::string::npos);
    }
    SUBCASE("block in two tracts") {
        pop.records[1].geo.tract = "6.01";
        CHECK_FALSE(validate_population(pop).empty());
    }
}
