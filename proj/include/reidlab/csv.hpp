#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reidlab/analyze.hpp"
#include "reidlab/reid.hpp"
#include "reidlab/synthgen.hpp"
#include "reidlab/tabulate.hpp"

namespace reidlab::csv {

/// Comment lines ("# key=value") echoed at the top of every file written.
using Provenance = std::vector<std::pair<std::string, std::string>>;

// All writers produce UTF-8 CSV with a header row, writing to a temporary
// file and renaming into place so failures never leave partial output.

/// Population spec files carry one row per fact:
///   tract,<code>,,,,,
///   block,<code>,<size>,,,,
///   freq,<sex>,<race>,<ethnicity>,<age>,<count>,
///   pin,<block>,<sex>,<race>,<ethnicity>,<count>,
void write_spec(const std::filesystem::path& path, const PopulationSpec& spec,
                const Provenance& meta = {});
PopulationSpec read_spec(const std::filesystem::path& path);

void write_population(const std::filesystem::path& path, const Population& pop,
                      const Provenance& meta = {});
Population read_population(const std::filesystem::path& path);

void write_external(const std::filesystem::path& path,
                    const std::vector<ExternalRecord>& records, const std::string& tract,
                    const Provenance& meta = {});
std::vector<ExternalRecord> read_external(const std::filesystem::path& path);

/// Writes tract.csv, block_grouped.csv and block_race_eth.csv under `dir`.
void write_tables(const std::filesystem::path& dir, const ReleasedTables& tables,
                  const Provenance& meta = {});
ReleasedTables read_tables(const std::filesystem::path& dir);

void write_reconstruction(const std::filesystem::path& path, const Reconstruction& recon,
                          const Provenance& meta = {});

void write_matches(const std::filesystem::path& path, const std::vector<MatchRun>& runs,
                   const Provenance& meta = {});

void write_stability_report(const std::filesystem::path& path, const StabilityReport& report,
                            const Provenance& meta = {});

void write_designation_matrix(const std::filesystem::path& path,
                              const std::vector<DesignationMatrix>& matrices,
                              const Provenance& meta = {});

void write_refutation_reports(const std::filesystem::path& path,
                              const std::vector<RefutationReport>& reports,
                              const Provenance& meta = {});

}  // namespace reidlab::csv
