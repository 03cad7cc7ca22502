#include "reidlab/reid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <unordered_map>

namespace reidlab {

std::string_view to_string(MatchPass p) {
    return p == MatchPass::Exact ? "exact" : "fuzzy";
}

MatchRun match_reconstruction(const Reconstruction& recon,
                              const std::vector<ExternalRecord>& external) {
    MatchRun run;
    run.reconstruction_index = recon.index;
    run.outcomes.resize(recon.rows.size());

    std::vector<bool> claimed(external.size(), false);

    auto claim_first = [&](const ReconRow& row, int tolerance) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < external.size(); ++i) {
            if (claimed[i]) continue;
            const ExternalRecord& ext = external[i];
            if (ext.geo.block != row.block || ext.sex != row.sex) continue;
            if (std::abs(ext.age - row.age) > tolerance) continue;
            claimed[i] = true;
            return i;
        }
        return std::nullopt;
    };

    // Pass 1: exact age.
    for (std::size_t r = 0; r < recon.rows.size(); ++r) {
        const ReconRow& row = recon.rows[r];
        run.outcomes[r].row_id = row.row_id;
        if (auto hit = claim_first(row, 0)) {
            run.outcomes[r].ext_id = external[*hit].ext_id;
            run.outcomes[r].pass = MatchPass::Exact;
        }
    }
    // Pass 2: age within +/- 1 for rows still unmatched.
    for (std::size_t r = 0; r < recon.rows.size(); ++r) {
        if (run.outcomes[r].matched()) continue;
        if (auto hit = claim_first(recon.rows[r], 1)) {
            run.outcomes[r].ext_id = external[*hit].ext_id;
            run.outcomes[r].pass = MatchPass::Fuzzy;
        }
    }

    long matched = std::count_if(run.outcomes.begin(), run.outcomes.end(),
                                 [](const MatchOutcome& o) { return o.matched(); });
    run.putative_rate =
        recon.rows.empty() ? 0.0 : static_cast<double>(matched) / recon.rows.size();
    return run;
}

RateSummary putative_rate_batch(const std::vector<MatchRun>& runs) {
    if (runs.empty()) throw std::domain_error("putative_rate_batch requires at least one run");
    RateSummary out;
    out.rates.reserve(runs.size());
    for (const MatchRun& run : runs) out.rates.push_back(run.putative_rate);
    out.min = *std::min_element(out.rates.begin(), out.rates.end());
    out.max = *std::max_element(out.rates.begin(), out.rates.end());
    out.mean = 0.0;
    for (double r : out.rates) out.mean += r;
    out.mean /= static_cast<double>(out.rates.size());
    return out;
}

ConfirmResult confirm_matches(const MatchRun& run, const Reconstruction& recon,
                              const Population& cef) {
    std::unordered_map<std::string, const PersonRecord*> by_id;
    for (const PersonRecord& rec : cef.records) by_id[rec.person_id] = &rec;

    ConfirmResult out;
    out.flags.resize(run.outcomes.size(), false);
    for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
        const MatchOutcome& outcome = run.outcomes[i];
        if (!outcome.matched()) continue;
        auto it = by_id.find(*outcome.ext_id);
        if (it == by_id.end())
            throw std::runtime_error("matched ext_id " + *outcome.ext_id +
                                     " not present in ground-truth population");
        const PersonRecord& truth = *it->second;
        const ReconRow& row = recon.rows.at(i);
        bool ok = truth.geo.block == row.block && truth.sex == row.sex &&
                  truth.race == row.race && truth.ethnicity == row.ethnicity &&
                  truth.age == row.age;
        if (ok) {
            out.flags[i] = true;
            ++out.confirmed;
        }
    }
    return out;
}

std::vector<ExternalRecord> derive_external_file(const Population& pop) {
    std::vector<ExternalRecord> out;
    out.reserve(pop.records.size());
    for (const PersonRecord& rec : pop.records)
        out.push_back({rec.person_id, rec.geo, rec.sex, rec.age});
    return out;
}

}  // namespace reidlab
