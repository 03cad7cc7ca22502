#include <doctest.h>

#include <cmath>

#include "reidlab/analyze.hpp"
#include "reidlab/synthgen.hpp"

using namespace reidlab;

namespace {

MatchRun make_run(int index, std::vector<std::optional<std::string>> ids) {
    MatchRun run;
    run.reconstruction_index = index;
    long matched = 0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        MatchOutcome o;
        o.row_id = static_cast<int>(i);
        o.ext_id = std::move(ids[i]);
        if (o.ext_id) {
            o.pass = MatchPass::Exact;
            ++matched;
        }
        run.outcomes.push_back(std::move(o));
    }
    run.putative_rate = ids.empty() ? 0.0 : static_cast<double>(matched) / ids.size();
    return run;
}

}  // namespace

TEST_CASE("identity_matrix shape and errors") {
    auto run = make_run(0, {"A", "B", std::nullopt});
    IdentityMatrix m = identity_matrix({run});
    CHECK(m.row_ids == std::vector<int>{0, 1, 2});
    CHECK(m.run_count() == 1);
    CHECK_FALSE(m.entries[2][0].has_value());

    CHECK_THROWS_AS(identity_matrix({}), std::domain_error);

    auto shorter = make_run(1, {"A", "B"});
    CHECK_THROWS_AS(identity_matrix({run, shorter}), std::domain_error);
}

TEST_CASE("stability_report counts modes and distinct identities") {
    // Row 0: A in all 10 runs. Row 1: five distinct with blanks.
    std::vector<MatchRun> runs;
    std::vector<std::vector<std::optional<std::string>>> columns = {
        {"A", "B"}, {"A", "C"}, {"A", std::nullopt}, {"A", "B"}, {"A", "D"},
        {"A", "E"}, {"A", "B"}, {"A", std::nullopt}, {"A", "F"}, {"A", "B"}};
    for (std::size_t j = 0; j < columns.size(); ++j)
        runs.push_back(make_run(static_cast<int>(j), columns[j]));

    IdentityMatrix m = identity_matrix(runs);
    StabilityReport report = stability_report(m, {{0, 1}, {1, 9}});

    CHECK(report.modal_counts[0] == 10);
    CHECK(report.distinct_counts[0] == 1);
    CHECK(report.modal_counts[1] == 4);       // B appears four times
    CHECK(report.distinct_counts[1] == 6);    // B,C,D,E,F + NoMatch

    long modal_mass = 0, distinct_mass = 0;
    for (long v : report.modal_histogram) modal_mass += v;
    for (long v : report.distinct_histogram) distinct_mass += v;
    CHECK(modal_mass == 2);
    CHECK(distinct_mass == 2);
    CHECK(report.bound_violations.empty());
}

TEST_CASE("all-NoMatch rows count the blanks as modal") {
    std::vector<MatchRun> runs = {make_run(0, {std::nullopt}), make_run(1, {std::nullopt})};
    StabilityReport report = stability_report(identity_matrix(runs), {});
    CHECK(report.modal_counts[0] == 2);
    CHECK(report.distinct_counts[0] == 1);
}

TEST_CASE("identity bound violations are reported") {
    std::vector<MatchRun> runs = {make_run(0, {"A"}), make_run(1, {"B"}),
                                  make_run(2, {"C"})};
    StabilityReport report = stability_report(identity_matrix(runs), {{0, 1}});
    // 3 distinct real ids against a block of one individual (bound 2).
    REQUIRE(report.bound_violations.size() == 1);
}

TEST_CASE("pairwise agreement: identical runs agree at the matched fraction") {
    auto run = make_run(0, {"A", "B", std::nullopt, "C"});
    auto copy = make_run(1, {"A", "B", std::nullopt, "C"});
    StabilityReport report = stability_report(identity_matrix({run, copy}), {});
    // Mutual NoMatch never counts as agreement.
    CHECK(report.agreement_min == doctest::Approx(0.75));
    CHECK(report.agreement_max == doctest::Approx(0.75));
    CHECK(report.pairwise_agreement[0][1] == report.pairwise_agreement[1][0]);
    CHECK(report.pairwise_agreement[0][0] == doctest::Approx(run.putative_rate));
}

TEST_CASE("stability_report requires two runs") {
    auto run = make_run(0, {"A"});
    CHECK_THROWS_AS(stability_report(identity_matrix({run}), {}), std::domain_error);
}

TEST_CASE("designation matrix carries the claiming row's race and ethnicity") {
    Population pop;
    pop.records = {{"P0", {"5.01", "b1"}, Sex::Male, 25, Race::AIAN, Ethnicity::Hispanic}};
    auto external = derive_external_file(pop);

    Reconstruction recon;
    recon.tract = "5.01";
    recon.rows = {{0, "b1", Sex::Male, 25, Race::AIAN, Ethnicity::Hispanic}};
    MatchRun run = match_reconstruction(recon, external);

    DesignationMatrix m = designation_matrix({run}, {recon}, external, "b1");
    REQUIRE(m.ext_ids == std::vector<std::string>{"P0"});
    REQUIRE(m.entries[0][0].has_value());
    CHECK(m.entries[0][0]->first == Race::AIAN);

    SUBCASE("unmatched externals get blank rows") {
        recon.rows[0].age = 80;  // never within one year
        MatchRun miss = match_reconstruction(recon, external);
        DesignationMatrix blank = designation_matrix({miss}, {recon}, external, "b1");
        CHECK_FALSE(blank.entries[0][0].has_value());
    }
    SUBCASE("unknown block is a domain error") {
        CHECK_THROWS_AS(designation_matrix({run}, {recon}, external, "zz"),
                        std::domain_error);
    }
}

TEST_CASE("singleton match probability") {
    std::map<Age, long> white_nh{{25, 39}, {26, 53}, {27, 56}, {28, 57}, {29, 58}};
    CHECK(singleton_match_probability(white_nh, 28) == doctest::Approx(171.0 / 263.0));
    CHECK(singleton_match_probability(white_nh, 26) == doctest::Approx(148.0 / 263.0));
    CHECK(singleton_match_probability({{28, 1}}, 28) == 1.0);
    CHECK(singleton_match_probability({{25, 1}, {29, 1}}, 27) == 0.0);
    CHECK_THROWS_AS(singleton_match_probability({}, 28), std::domain_error);
}

TEST_CASE("binomial pmf") {
    CHECK(binomial_pmf(10, 8, 0.6) == doctest::Approx(0.120932352).epsilon(1e-9));
    CHECK(binomial_pmf(7, 0, 0.0) == 1.0);
    CHECK(binomial_pmf(7, 7, 1.0) == 1.0);
    CHECK_THROWS_AS(binomial_pmf(10, 11, 0.5), std::domain_error);
    CHECK_THROWS_AS(binomial_pmf(10, 5, 1.5), std::domain_error);

    SUBCASE("pmf sums to one") {
        double sum = 0.0;
        for (int k = 0; k <= 10; ++k) sum += binomial_pmf(10, k, 0.6);
        CHECK(std::abs(sum - 1.0) < 1e-12);
    }
    SUBCASE("matches brute force over all 2^10 outcomes") {
        double p = 0.6;
        double total = 0.0;
        for (int mask = 0; mask < 1024; ++mask) {
            int successes = __builtin_popcount(static_cast<unsigned>(mask));
            if (successes != 8) continue;
            total += std::pow(p, successes) * std::pow(1 - p, 10 - successes);
        }
        CHECK(std::abs(total - binomial_pmf(10, 8, p)) < 1e-12);
    }
}

TEST_CASE("expected high agreement") {
    CHECK(expected_high_agreement(26, binomial_pmf(10, 8, 0.6)) ==
          doctest::Approx(3.1442411520).epsilon(1e-9));
    CHECK(expected_high_agreement(0, 0.5) == 0.0);
    CHECK_THROWS_AS(expected_high_agreement(-1, 0.5), std::domain_error);
}

TEST_CASE("refutation reports") {
    auto [pop, _] = fixture_tract501();
    auto external = derive_external_file(pop);
    ReleasedTables tables = tabulate(pop);

    auto recons = reconstruct_batch(tables, 21, 5);
    std::vector<MatchRun> runs;
    for (const auto& recon : recons) runs.push_back(match_reconstruction(recon, external));

    SUBCASE("row challenge on the White/Hispanic record in 4012") {
        RefutationReport report = refutation_report(runs, recons, "4012",
                                                    RefutationKind::Row, Race::White,
                                                    Ethnicity::Hispanic);
        REQUIRE(report.entries.size() == 1);
        CHECK(report.entries[0].identities.size() >= 2);
    }
    SUBCASE("category challenge unions designated identities") {
        RefutationReport report = refutation_report(runs, recons, "4012",
                                                    RefutationKind::Category, Race::Black,
                                                    Ethnicity::NotHispanic);
        REQUIRE(report.entries.size() == 1);
        CHECK(report.entries[0].identities.size() >= 4);
        // Every candidate must live in block 4012.
        for (const std::string& id : report.entries[0].identities) {
            auto it = std::find_if(external.begin(), external.end(),
                                   [&](const ExternalRecord& e) { return e.ext_id == id; });
            REQUIRE(it != external.end());
            CHECK(it->geo.block == "4012");
        }
    }
    SUBCASE("single run degenerates to that run's assignment") {
        std::vector<MatchRun> one{runs[0]};
        std::vector<Reconstruction> one_recon{recons[0]};
        RefutationReport report = refutation_report(one, one_recon, "4012",
                                                    RefutationKind::Row, Race::White,
                                                    Ethnicity::Hispanic);
        CHECK(report.entries[0].identities.size() +
                  (report.entries[0].ever_unmatched ? 1 : 0) ==
              1);
    }
    SUBCASE("unknown target is a domain error") {
        CHECK_THROWS_AS(refutation_report(runs, recons, "4012", RefutationKind::Row,
                                          Race::NHPI, Ethnicity::Hispanic),
                        std::domain_error);
    }
}
