#pragma once

#include <optional>
#include <string>
#include <vector>

#include "reidlab/reconstruct.hpp"

namespace reidlab {

/// External-data row: identity plus (block, sex, age), no race/ethnicity.
struct ExternalRecord {
    std::string ext_id;
    GeoId geo;
    Sex sex = Sex::Male;
    Age age = 0;

    bool operator==(const ExternalRecord&) const = default;
};

enum class MatchPass { Exact, Fuzzy };

std::string_view to_string(MatchPass p);

struct MatchOutcome {
    int row_id = 0;
    std::optional<std::string> ext_id;  // nullopt = no match
    std::optional<MatchPass> pass;

    bool matched() const { return ext_id.has_value(); }
};

struct MatchRun {
    int reconstruction_index = 0;
    std::vector<MatchOutcome> outcomes;  // row_id order
    double putative_rate = 0.0;
};

struct RateSummary {
    std::vector<double> rates;
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct ConfirmResult {
    long confirmed = 0;
    std::vector<bool> flags;  // aligned with run outcomes
};

/// Two-pass first-match putative reidentification. Pass 1 claims, per
/// reconstruction row in row order, the first unclaimed external record
/// equal on (block, sex, age). Pass 2 revisits unmatched rows and claims
/// the first unclaimed external record equal on (block, sex) with age
/// within +/- 1 year. "First" is external file order; each external record
/// is claimed at most once.
MatchRun match_reconstruction(const Reconstruction& recon,
                              const std::vector<ExternalRecord>& external);

RateSummary putative_rate_batch(const std::vector<MatchRun>& runs);

/// A putative match is confirmed iff the ground-truth record with the
/// claimed id agrees with the reconstructed row on block, sex, race,
/// ethnicity, and exact age.
ConfirmResult confirm_matches(const MatchRun& run, const Reconstruction& recon,
                              const Population& cef);

/// Projection of a ground-truth population to the external-data role:
/// identity, block, sex, age; race and ethnicity dropped.
std::vector<ExternalRecord> derive_external_file(const Population& pop);

}  // namespace reidlab
