#include <doctest.h>

#include <set>

#include "reidlab/reid.hpp"
#include "reidlab/synthgen.hpp"

using namespace reidlab;

namespace {

Reconstruction one_row(const std::string& block, Sex sex, Age age) {
    Reconstruction recon;
    recon.tract = "5.01";
    recon.rows = {{0, block, sex, age, Race::White, Ethnicity::NotHispanic}};
    return recon;
}

ExternalRecord ext(const std::string& id, const std::string& block, Sex sex, Age age) {
    return {id, {"5.01", block}, sex, age};
}

/// The identity reconstruction of a population: same blocks and ages.
Reconstruction mirror(const Population& pop) {
    Reconstruction recon;
    if (!pop.records.empty()) recon.tract = pop.records.front().geo.tract;
    int id = 0;
    for (const auto& rec : pop.records)
        recon.rows.push_back({id++, rec.geo.block, rec.sex, rec.age, rec.race, rec.ethnicity});
    return recon;
}

}  // namespace

TEST_CASE("two-pass matching semantics") {
    std::vector<ExternalRecord> external{ext("E1", "B", Sex::Male, 28)};

    SUBCASE("exact age match in pass 1") {
        MatchRun run = match_reconstruction(one_row("B", Sex::Male, 28), external);
        REQUIRE(run.outcomes[0].matched());
        CHECK(*run.outcomes[0].ext_id == "E1");
        CHECK(*run.outcomes[0].pass == MatchPass::Exact);
    }
    SUBCASE("age off by one matches in pass 2") {
        MatchRun run = match_reconstruction(one_row("B", Sex::Male, 27), external);
        REQUIRE(run.outcomes[0].matched());
        CHECK(*run.outcomes[0].pass == MatchPass::Fuzzy);
    }
    SUBCASE("age off by three never matches") {
        MatchRun run = match_reconstruction(one_row("B", Sex::Male, 25), external);
        CHECK_FALSE(run.outcomes[0].matched());
    }
    SUBCASE("sex must agree in both passes") {
        MatchRun run = match_reconstruction(one_row("B", Sex::Female, 28), external);
        CHECK_FALSE(run.outcomes[0].matched());
    }
    SUBCASE("block must agree") {
        MatchRun run = match_reconstruction(one_row("C", Sex::Male, 28), external);
        CHECK_FALSE(run.outcomes[0].matched());
    }
}

TEST_CASE("pass 1 exhausts exact matches before pass 2 runs") {
    // Row 0 (age 27) would fuzzily claim E1 (age 28) if pass 2 ran first;
    // pass 1 must hand E1 to row 1 (exact age 28) instead.
    Reconstruction recon;
    recon.tract = "5.01";
    recon.rows = {{0, "B", Sex::Male, 27, Race::White, Ethnicity::NotHispanic},
                  {1, "B", Sex::Male, 28, Race::White, Ethnicity::NotHispanic}};
    std::vector<ExternalRecord> external{ext("E1", "B", Sex::Male, 28)};
    MatchRun run = match_reconstruction(recon, external);
    CHECK_FALSE(run.outcomes[0].matched());
    REQUIRE(run.outcomes[1].matched());
    CHECK(*run.outcomes[1].pass == MatchPass::Exact);
}

TEST_CASE("fuzzy pass takes the first unclaimed record in file order") {
    std::vector<ExternalRecord> external{ext("E1", "B", Sex::Male, 26),
                                         ext("E2", "B", Sex::Male, 28)};
    MatchRun run = match_reconstruction(one_row("B", Sex::Male, 27), external);
    REQUIRE(run.outcomes[0].matched());
    CHECK(*run.outcomes[0].ext_id == "E1");
}

TEST_CASE("matched external ids are distinct within a run") {
    auto [pop, _] = fixture_tract501();
    auto external = derive_external_file(pop);
    ReleasedTables tables = tabulate(pop);
    for (const Reconstruction& recon : reconstruct_batch(tables, 11, 3)) {
        MatchRun run = match_reconstruction(recon, external);
        std::set<std::string> ids;
        long matched = 0;
        for (const auto& o : run.outcomes)
            if (o.matched()) {
                ids.insert(*o.ext_id);
                ++matched;
            }
        CHECK(static_cast<long>(ids.size()) == matched);
    }
}

TEST_CASE("matching is stable for a fixed external order") {
    auto [pop, _] = fixture_tract501();
    auto external = derive_external_file(pop);
    Reconstruction recon = reconstruct(tabulate(pop), 5);
    MatchRun a = match_reconstruction(recon, external);
    MatchRun b = match_reconstruction(recon, external);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i)
        CHECK(a.outcomes[i].ext_id == b.outcomes[i].ext_id);
}

TEST_CASE("putative rates") {
    auto [pop, _] = fixture_tract501();
    auto external = derive_external_file(pop);

    SUBCASE("the truth matches itself completely") {
        MatchRun run = match_reconstruction(mirror(pop), external);
        CHECK(run.putative_rate == 1.0);
    }
    SUBCASE("empty external file means rate zero") {
        MatchRun run = match_reconstruction(mirror(pop), {});
        CHECK(run.putative_rate == 0.0);
    }
    SUBCASE("batch summary is consistent with the list") {
        std::vector<MatchRun> runs;
        for (const auto& recon : reconstruct_batch(tabulate(pop), 3, 4))
            runs.push_back(match_reconstruction(recon, external));
        RateSummary summary = putative_rate_batch(runs);
        REQUIRE(summary.rates.size() == 4);
        for (double r : summary.rates) {
            CHECK(r >= summary.min);
            CHECK(r <= summary.max);
            CHECK(r >= 0.0);
            CHECK(r <= 1.0);
        }
        CHECK(summary.mean ==
              doctest::Approx((summary.rates[0] + summary.rates[1] + summary.rates[2] +
                               summary.rates[3]) /
                              4.0));
    }
    SUBCASE("empty batch is a domain error") {
        CHECK_THROWS_AS(putative_rate_batch({}), std::domain_error);
    }
}

TEST_CASE("confirmation compares against ground truth on all attributes") {
    auto [pop, _] = fixture_tract501();
    auto external = derive_external_file(pop);

    SUBCASE("the mirrored truth is fully confirmed") {
        Reconstruction recon = mirror(pop);
        MatchRun run = match_reconstruction(recon, external);
        ConfirmResult result = confirm_matches(run, recon, pop);
        CHECK(result.confirmed == static_cast<long>(pop.records.size()));
    }
    SUBCASE("a race mismatch blocks confirmation") {
        Reconstruction recon = mirror(pop);
        recon.rows[0].race =
            recon.rows[0].race == Race::White ? Race::Black : Race::White;
        MatchRun run = match_reconstruction(recon, external);
        ConfirmResult result = confirm_matches(run, recon, pop);
        CHECK_FALSE(result.flags[0]);
    }
    SUBCASE("confirmed is never more than matched") {
        Reconstruction recon = reconstruct(tabulate(pop), 9);
        MatchRun run = match_reconstruction(recon, external);
        ConfirmResult result = confirm_matches(run, recon, pop);
        long matched = 0;
        for (const auto& o : run.outcomes) matched += o.matched() ? 1 : 0;
        CHECK(result.confirmed <= matched);
    }
    SUBCASE("unknown ext_id is a data error") {
        Reconstruction recon = mirror(pop);
        MatchRun run = match_reconstruction(recon, external);
        Population empty;
        CHECK_THROWS(confirm_matches(run, recon, empty));
    }
}
