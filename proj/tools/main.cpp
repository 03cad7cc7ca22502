#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "reidlab/analyze.hpp"
#include "reidlab/csv.hpp"
#include "reidlab/reconstruct.hpp"
#include "reidlab/reid.hpp"
#include "reidlab/synthgen.hpp"
#include "reidlab/tabulate.hpp"

namespace fs = std::filesystem;
using namespace reidlab;

namespace {

struct Options {
    std::uint64_t seed = 0;
    int runs = 10;
    std::string fidelity = "full";
    std::string fixture;
    std::string spec_path;
    std::string pop_path;
    std::string tables_path;
    std::string external_path;
    std::string out_path;
    bool check = false;
};

Fidelity parse_fidelity(const std::string& s) {
    if (s == "full") return Fidelity::Full;
    if (s == "census") return Fidelity::CensusLike;
    throw CLI::ValidationError("--fidelity must be 'full' or 'census'");
}

PopulationSpec load_spec(const Options& opt) {
    if (opt.fixture == "tract501") return fixture_tract501().second;
    if (!opt.fixture.empty())
        throw std::runtime_error("unknown fixture '" + opt.fixture + "' (have: tract501)");
    if (opt.spec_path.empty())
        throw std::runtime_error("either --fixture or --spec is required");
    return csv::read_spec(opt.spec_path);
}

csv::Provenance provenance(const Options& opt) {
    return {{"seed", std::to_string(opt.seed)}, {"runs", std::to_string(opt.runs)}};
}

std::string scientific_form(const AssignmentCount& v) {
    std::string digits = v.str();
    if (digits.size() <= 1) return digits + "e+00";
    std::ostringstream os;
    os << digits[0] << "." << digits.substr(1, 5) << "e+" << std::setw(2)
       << std::setfill('0') << (digits.size() - 1);
    return os.str();
}

int cmd_generate(const Options& opt) {
    PopulationSpec spec = load_spec(opt);
    Population pop = opt.fixture == "tract501" ? fixture_tract501().first
                                               : generate_population(spec, opt.seed);
    if (auto violations = validate_population(pop); !violations.empty()) {
        for (const auto& v : violations)
            std::cerr << "violation: " << v.subject << ": " << v.rule << "\n";
        return 1;
    }
    csv::write_population(opt.out_path.empty() ? "population.csv" : opt.out_path, pop,
                          provenance(opt));
    if (!opt.external_path.empty())
        csv::write_external(opt.external_path, derive_external_file(pop), spec.tract,
                            provenance(opt));
    std::cout << pop.records.size() << " records written\n";
    return 0;
}

int cmd_tabulate(const Options& opt) {
    if (opt.check) {
        ReleasedTables tables = csv::read_tables(opt.tables_path);
        auto violations = check_consistency(tables);
        for (const auto& v : violations)
            std::cout << "violation: " << v.subject << ": " << v.rule << "\n";
        std::cout << (violations.empty() ? "consistent" : "inconsistent") << "\n";
        return violations.empty() ? 0 : 1;
    }
    Population pop = opt.fixture == "tract501" ? fixture_tract501().first
                                               : csv::read_population(opt.pop_path);
    ReleasedTables tables = tabulate(pop, parse_fidelity(opt.fidelity));
    auto violations = check_consistency(tables);
    csv::write_tables(opt.out_path.empty() ? "tables" : opt.out_path, tables, provenance(opt));
    std::cout << "tables written; consistency: "
              << (violations.empty() ? "ok" : "VIOLATED") << "\n";
    return violations.empty() ? 0 : 1;
}

int cmd_attack(const Options& opt) {
    ReleasedTables tables;
    std::vector<ExternalRecord> external;
    if (opt.fixture == "tract501") {
        auto [pop, spec] = fixture_tract501();
        tables = tabulate(pop, parse_fidelity(opt.fidelity));
        external = derive_external_file(pop);
    } else {
        tables = csv::read_tables(opt.tables_path);
        external = csv::read_external(opt.external_path);
    }

    fs::path out = opt.out_path.empty() ? "attack_out" : opt.out_path;
    fs::create_directories(out);
    csv::Provenance meta = provenance(opt);

    std::vector<Reconstruction> recons = reconstruct_batch(tables, opt.seed, opt.runs);
    std::vector<MatchRun> runs;
    runs.reserve(recons.size());
    for (const Reconstruction& recon : recons) {
        std::ostringstream name;
        name << "recon_" << std::setw(2) << std::setfill('0') << recon.index << ".csv";
        csv::Provenance run_meta = meta;
        run_meta.emplace_back("run", std::to_string(recon.index));
        run_meta.emplace_back("run_seed", std::to_string(recon.seed));
        csv::write_reconstruction(out / name.str(), recon, run_meta);
        runs.push_back(match_reconstruction(recon, external));
    }
    csv::write_matches(out / "matches.csv", runs, meta);

    RateSummary rates = putative_rate_batch(runs);
    std::cout << "Reconstruction          ";
    for (std::size_t i = 0; i < rates.rates.size(); ++i) std::cout << " " << (i + 1);
    std::cout << "\nPutative Identification ";
    for (double r : rates.rates)
        std::cout << " " << std::lround(r * 100.0) << "%";
    std::cout << "\nmean " << std::lround(rates.mean * 100.0) << "%  min "
              << std::lround(rates.min * 100.0) << "%  max " << std::lround(rates.max * 100.0)
              << "%\n";

    // Per-block external head-counts for the identity-bound check.
    std::map<std::string, long> block_ext;
    for (const ExternalRecord& ext : external) ++block_ext[ext.geo.block];
    std::map<int, long> row_block_sizes;
    for (const ReconRow& row : recons.front().rows)
        row_block_sizes[row.row_id] = block_ext[row.block];

    if (opt.runs < 2) {
        std::cerr << "warning: --runs 1 gives no pairwise statistics; "
                     "stability report skipped\n";
    } else {
        IdentityMatrix matrix = identity_matrix(runs);
        StabilityReport stability = stability_report(matrix, row_block_sizes);
        csv::write_stability_report(out / "stability.csv", stability, meta);
    }

    std::vector<DesignationMatrix> designations;
    for (const auto& [block, count] : block_ext)
        designations.push_back(designation_matrix(runs, recons, external, block));
    csv::write_designation_matrix(out / "designation.csv", designations, meta);

    // One row challenge and one category challenge per demographic cell
    // observed in each block.
    std::set<std::tuple<std::string, Race, Ethnicity>> categories;
    for (const ReconRow& row : recons.front().rows)
        categories.insert({row.block, row.race, row.ethnicity});
    std::vector<RefutationReport> refutations;
    for (const auto& [block, race, eth] : categories) {
        refutations.push_back(
            refutation_report(runs, recons, block, RefutationKind::Row, race, eth));
        refutations.push_back(
            refutation_report(runs, recons, block, RefutationKind::Category, race, eth));
    }
    csv::write_refutation_reports(out / "refutation.csv", refutations, meta);
    return 0;
}

int cmd_count(const Options& opt) {
    ReleasedTables tables;
    if (opt.fixture == "tract501")
        tables = tabulate(fixture_tract501().first, parse_fidelity(opt.fidelity));
    else
        tables = csv::read_tables(opt.tables_path);

    CellSet cells = build_cells(tables);
    AssignmentCount total = 1;
    std::cout << "cell,assignments\n";
    for (const CellProblem& cell : cells.exact) {
        AssignmentCount count = count_assignments(cell);
        total *= count;
        std::cout << cell.key_string() << "," << count.str() << "\n";
    }
    std::cout << "total," << total.str() << "\n";
    std::cout << "total_scientific," << scientific_form(total) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reconstruction / reidentification laboratory for census-style tables"};
    app.require_subcommand(1);

    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "base seed (default 0)");
        sub->add_option("--fixture", opt.fixture, "built-in fixture name (tract501)");
        sub->add_option("--fidelity", opt.fidelity, "table fidelity: full or census")
            ->check(CLI::IsMember({"full", "census"}));
        sub->add_option("--out", opt.out_path, "output file or directory");
    };

    CLI::App* generate = app.add_subcommand("generate", "generate a population CSV");
    add_common(generate);
    generate->add_option("--spec", opt.spec_path, "population spec CSV");
    generate->add_option("--external", opt.external_path,
                         "also write the derived external file here");

    CLI::App* tabulate_cmd = app.add_subcommand("tabulate", "emit released tables");
    add_common(tabulate_cmd);
    tabulate_cmd->add_option("--pop", opt.pop_path, "population CSV to tabulate");
    tabulate_cmd->add_option("--tables", opt.tables_path, "existing tables dir (with --check)");
    tabulate_cmd->add_flag("--check", opt.check, "re-check consistency of existing tables");

    CLI::App* attack = app.add_subcommand(
        "attack", "reconstruct, match against external data, and report instability");
    add_common(attack);
    attack->add_option("--runs", opt.runs, "number of reconstructions")
        ->check(CLI::PositiveNumber);
    attack->add_option("--tables", opt.tables_path, "released tables directory");
    attack->add_option("--external", opt.external_path, "external records CSV");

    CLI::App* count = app.add_subcommand("count", "exact feasible-assignment counts");
    add_common(count);
    count->add_option("--tables", opt.tables_path, "released tables directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (generate->parsed()) return cmd_generate(opt);
        if (tabulate_cmd->parsed()) return cmd_tabulate(opt);
        if (attack->parsed()) return cmd_attack(opt);
        if (count->parsed()) return cmd_count(opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
