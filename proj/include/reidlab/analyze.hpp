#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reidlab/reid.hpp"

namespace reidlab {

/// Rows are reconstructed records, columns are reconstruction runs; an
/// entry is the external identity claimed in that run, or nothing.
struct IdentityMatrix {
    std::vector<int> row_ids;
    std::vector<std::vector<std::optional<std::string>>> entries;  // [row][run]

    std::size_t run_count() const { return entries.empty() ? 0 : entries[0].size(); }
};

struct StabilityReport {
    std::vector<int> modal_counts;       // per row: max occurrences of one real identity
    std::vector<long> modal_histogram;   // bins 1..R
    std::vector<int> distinct_counts;    // per row: distinct identities, NoMatch = one category
    std::vector<long> distinct_histogram;
    std::vector<std::vector<double>> pairwise_agreement;  // R x R, diagonal = self
    double agreement_min = 0.0;   // over off-diagonal pairs
    double agreement_mean = 0.0;
    double agreement_max = 0.0;
    std::vector<Violation> bound_violations;  // identity-bound breaches (expected empty)
};

/// Rows are external individuals of one block, columns are runs; an entry
/// is the (race, ethnicity) of the reconstructed row that claimed them.
struct DesignationMatrix {
    std::string block;
    std::vector<std::string> ext_ids;
    std::vector<std::vector<std::optional<std::pair<Race, Ethnicity>>>> entries;  // [ext][run]
};

enum class RefutationKind { Row, Category };

struct RefutationEntry {
    int row_id = -1;  // -1 for category challenges
    std::vector<std::string> identities;  // first-occurrence order across runs
    bool ever_unmatched = false;
};

struct RefutationReport {
    std::string block;
    RefutationKind kind = RefutationKind::Row;
    Race race = Race::White;
    Ethnicity ethnicity = Ethnicity::NotHispanic;
    std::vector<RefutationEntry> entries;
};

IdentityMatrix identity_matrix(const std::vector<MatchRun>& runs);

/// `block_sizes` maps each row_id to the number of external individuals in
/// that row's block; used for the (k + 1) identity-bound check.
StabilityReport stability_report(const IdentityMatrix& matrix,
                                 const std::map<int, long>& block_sizes);

DesignationMatrix designation_matrix(const std::vector<MatchRun>& runs,
                                     const std::vector<Reconstruction>& recons,
                                     const std::vector<ExternalRecord>& external,
                                     const std::string& block);

/// Probability that a shuffled cell age lands within one year of the true
/// age: (f[a-1] + f[a] + f[a+1]) / n.
double singleton_match_probability(const std::map<Age, long>& age_freq, Age true_age);

double binomial_pmf(int trials, int successes, double p);

double expected_high_agreement(double singleton_count, double pmf_value);

/// Row challenge: every identity ever assigned across runs to the rows with
/// the target attributes in the block. Category challenge: the union of
/// external ids ever designated (race, ethnicity) in the block.
RefutationReport refutation_report(const std::vector<MatchRun>& runs,
                                   const std::vector<Reconstruction>& recons,
                                   const std::string& block, RefutationKind kind, Race race,
                                   Ethnicity ethnicity);

}  // namespace reidlab
