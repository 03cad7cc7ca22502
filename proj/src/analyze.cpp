#include "reidlab/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace reidlab {

IdentityMatrix identity_matrix(const std::vector<MatchRun>& runs) {
    if (runs.empty()) throw std::domain_error("identity_matrix requires at least one run");
    IdentityMatrix m;
    for (const MatchOutcome& o : runs.front().outcomes) m.row_ids.push_back(o.row_id);
    m.entries.assign(m.row_ids.size(),
                     std::vector<std::optional<std::string>>(runs.size(), std::nullopt));
    for (std::size_t j = 0; j < runs.size(); ++j) {
        const MatchRun& run = runs[j];
        if (run.outcomes.size() != m.row_ids.size())
            throw std::domain_error("runs cover different row sets");
        for (std::size_t i = 0; i < run.outcomes.size(); ++i) {
            if (run.outcomes[i].row_id != m.row_ids[i])
                throw std::domain_error("runs cover different row sets");
            m.entries[i][j] = run.outcomes[i].ext_id;
        }
    }
    return m;
}

StabilityReport stability_report(const IdentityMatrix& matrix,
                                 const std::map<int, long>& block_sizes) {
    const std::size_t R = matrix.run_count();
    if (R < 2) throw std::domain_error("stability_report requires at least two runs");

    StabilityReport report;
    report.modal_histogram.assign(R, 0);
    report.distinct_histogram.assign(R, 0);

    for (std::size_t i = 0; i < matrix.row_ids.size(); ++i) {
        std::unordered_map<std::string, int> occurrences;
        int no_match = 0;
        for (const auto& entry : matrix.entries[i]) {
            if (entry)
                ++occurrences[*entry];
            else
                ++no_match;
        }
        int modal = 0;
        for (const auto& [id, n] : occurrences) modal = std::max(modal, n);
        if (modal == 0) modal = no_match;  // row never matched anything real
        int distinct = static_cast<int>(occurrences.size()) + (no_match > 0 ? 1 : 0);

        report.modal_counts.push_back(modal);
        report.distinct_counts.push_back(distinct);
        ++report.modal_histogram[static_cast<std::size_t>(modal - 1)];
        ++report.distinct_histogram[static_cast<std::size_t>(distinct - 1)];

        if (auto it = block_sizes.find(matrix.row_ids[i]); it != block_sizes.end()) {
            long bound = it->second + 1;  // block individuals + no-match
            if (distinct > bound)
                report.bound_violations.push_back(
                    {"row " + std::to_string(matrix.row_ids[i]),
                     std::to_string(distinct) + " identities exceed block bound " +
                         std::to_string(bound)});
        }
    }

    report.pairwise_agreement.assign(R, std::vector<double>(R, 0.0));
    const double rows = static_cast<double>(matrix.row_ids.size());
    for (std::size_t j = 0; j < R; ++j)
        for (std::size_t k = j; k < R; ++k) {
            long agree = 0;
            for (const auto& row : matrix.entries)
                if (row[j] && row[k] && *row[j] == *row[k]) ++agree;
            double frac = rows == 0 ? 0.0 : static_cast<double>(agree) / rows;
            report.pairwise_agreement[j][k] = frac;
            report.pairwise_agreement[k][j] = frac;
        }

    double sum = 0.0;
    double lo = 1.0, hi = 0.0;
    std::size_t pairs = 0;
    for (std::size_t j = 0; j < R; ++j)
        for (std::size_t k = j + 1; k < R; ++k) {
            double a = report.pairwise_agreement[j][k];
            sum += a;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            ++pairs;
        }
    report.agreement_min = lo;
    report.agreement_max = hi;
    report.agreement_mean = sum / static_cast<double>(pairs);
    return report;
}

DesignationMatrix designation_matrix(const std::vector<MatchRun>& runs,
                                     const std::vector<Reconstruction>& recons,
                                     const std::vector<ExternalRecord>& external,
                                     const std::string& block) {
    if (runs.size() != recons.size())
        throw std::domain_error("designation_matrix needs one reconstruction per run");
    DesignationMatrix m;
    m.block = block;
    for (const ExternalRecord& ext : external)
        if (ext.geo.block == block) m.ext_ids.push_back(ext.ext_id);
    if (m.ext_ids.empty()) throw std::domain_error("no external records in block " + block);

    m.entries.assign(m.ext_ids.size(),
                     std::vector<std::optional<std::pair<Race, Ethnicity>>>(runs.size(),
                                                                            std::nullopt));
    for (std::size_t j = 0; j < runs.size(); ++j) {
        std::unordered_map<std::string, std::size_t> claimed_by;  // ext_id -> row index
        for (std::size_t r = 0; r < runs[j].outcomes.size(); ++r)
            if (runs[j].outcomes[r].matched()) claimed_by[*runs[j].outcomes[r].ext_id] = r;
        for (std::size_t i = 0; i < m.ext_ids.size(); ++i) {
            auto it = claimed_by.find(m.ext_ids[i]);
            if (it == claimed_by.end()) continue;
            const ReconRow& row = recons[j].rows.at(it->second);
            m.entries[i][j] = std::pair{row.race, row.ethnicity};
        }
    }
    return m;
}

double singleton_match_probability(const std::map<Age, long>& age_freq, Age true_age) {
    long n = 0;
    for (const auto& [age, count] : age_freq) n += count;
    if (n == 0) throw std::domain_error("empty cell");
    long near = 0;
    for (Age a = true_age - 1; a <= true_age + 1; ++a) {
        auto it = age_freq.find(a);
        if (it != age_freq.end()) near += it->second;
    }
    return static_cast<double>(near) / static_cast<double>(n);
}

double binomial_pmf(int trials, int successes, double p) {
    if (successes < 0 || successes > trials)
        throw std::domain_error("binomial_pmf requires 0 <= successes <= trials");
    if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_pmf requires 0 <= p <= 1");
    double coeff = static_cast<double>(count_partial(trials, successes));
    // pow(0, 0) == 1 covers the degenerate p in {0, 1} corners
    return coeff * std::pow(p, successes) * std::pow(1.0 - p, trials - successes);
}

double expected_high_agreement(double singleton_count, double pmf_value) {
    if (singleton_count < 0 || pmf_value < 0)
        throw std::domain_error("expected_high_agreement requires non-negative inputs");
    return singleton_count * pmf_value;
}

RefutationReport refutation_report(const std::vector<MatchRun>& runs,
                                   const std::vector<Reconstruction>& recons,
                                   const std::string& block, RefutationKind kind, Race race,
                                   Ethnicity ethnicity) {
    if (runs.empty() || runs.size() != recons.size())
        throw std::domain_error("refutation_report needs one reconstruction per run");
    RefutationReport report;
    report.block = block;
    report.kind = kind;
    report.race = race;
    report.ethnicity = ethnicity;

    if (kind == RefutationKind::Row) {
        // Rows are structurally aligned across runs, so locate targets in
        // the first reconstruction.
        for (std::size_t r = 0; r < recons.front().rows.size(); ++r) {
            const ReconRow& row = recons.front().rows[r];
            if (row.block != block || row.race != race || row.ethnicity != ethnicity) continue;
            RefutationEntry entry;
            entry.row_id = row.row_id;
            for (const MatchRun& run : runs) {
                const MatchOutcome& o = run.outcomes.at(r);
                if (!o.matched()) {
                    entry.ever_unmatched = true;
                } else if (std::find(entry.identities.begin(), entry.identities.end(),
                                     *o.ext_id) == entry.identities.end()) {
                    entry.identities.push_back(*o.ext_id);
                }
            }
            report.entries.push_back(std::move(entry));
        }
        if (report.entries.empty())
            throw std::domain_error("no reconstructed row in block " + block +
                                    " with the challenged attributes");
    } else {
        RefutationEntry entry;
        for (std::size_t j = 0; j < runs.size(); ++j) {
            for (std::size_t r = 0; r < runs[j].outcomes.size(); ++r) {
                const MatchOutcome& o = runs[j].outcomes[r];
                if (!o.matched()) continue;
                const ReconRow& row = recons[j].rows.at(r);
                if (row.block != block || row.race != race || row.ethnicity != ethnicity)
                    continue;
                if (std::find(entry.identities.begin(), entry.identities.end(), *o.ext_id) ==
                    entry.identities.end())
                    entry.identities.push_back(*o.ext_id);
            }
        }
        report.entries.push_back(std::move(entry));
    }
    return report;
}

}  // namespace reidlab
