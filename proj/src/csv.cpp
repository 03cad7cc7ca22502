#include "reidlab/csv.hpp"

#include <fstream>
#include <sstream>

namespace reidlab::csv {

namespace {

constexpr const char* kPooledToken = "Pooled";

class AtomicWriter {
  public:
    explicit AtomicWriter(const std::filesystem::path& path)
        : target_(path), tmp_(path.string() + ".tmp"), out_(tmp_, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open " + tmp_.string() + " for writing");
    }
    ~AtomicWriter() {
        if (!committed_) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }
    std::ostream& stream() { return out_; }
    void commit() {
        out_.close();
        if (!out_) throw std::runtime_error("write failed for " + tmp_.string());
        std::filesystem::rename(tmp_, target_);
        committed_ = true;
    }

  private:
    std::filesystem::path target_;
    std::filesystem::path tmp_;
    std::ofstream out_;
    bool committed_ = false;
};

void write_meta(std::ostream& os, const Provenance& meta) {
    for (const auto& [key, value] : meta) os << "# " << key << "=" << value << "\n";
}

struct Line {
    std::size_t number = 0;
    std::vector<std::string> fields;
};

std::vector<Line> read_rows(const std::filesystem::path& path,
                            std::size_t expected_fields) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<Line> rows;
    std::string line;
    std::size_t number = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // header row
            header_seen = true;
            continue;
        }
        Line row;
        row.number = number;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) row.fields.push_back(field);
        if (line.ends_with(',')) row.fields.push_back("");
        if (row.fields.size() != expected_fields)
            throw std::runtime_error(path.string() + ":" + std::to_string(number) +
                                     ": expected " + std::to_string(expected_fields) +
                                     " fields, got " + std::to_string(row.fields.size()));
        rows.push_back(std::move(row));
    }
    return rows;
}

long parse_count(const std::string& s, const std::filesystem::path& path, std::size_t line) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(line) +
                                 ": bad integer '" + s + "'");
    }
}

}  // namespace

void write_spec(const std::filesystem::path& path, const PopulationSpec& spec,
                const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    auto& os = w.stream();
    os << "kind,a,b,c,d,e,f\n";
    os << "tract," << spec.tract << ",,,,,\n";
    for (const auto& [block, size] : spec.blocks)
        os << "block," << block << "," << size << ",,,,\n";
    for (const auto& [cell, freq] : spec.cell_age_freq) {
        const auto& [sex, race, eth] = cell;
        for (const auto& [age, count] : freq)
            os << "freq," << to_string(sex) << "," << to_string(race) << "," << to_string(eth)
               << "," << age << "," << count << ",\n";
    }
    for (const auto& [key, count] : spec.explicit_counts) {
        const auto& [block, sex, race, eth] = key;
        os << "pin," << block << "," << to_string(sex) << "," << to_string(race) << ","
           << to_string(eth) << "," << count << ",\n";
    }
    w.commit();
}

PopulationSpec read_spec(const std::filesystem::path& path) {
    PopulationSpec spec;
    for (const Line& row : read_rows(path, 7)) {
        const std::string& kind = row.fields[0];
        if (kind == "tract") {
            spec.tract = row.fields[1];
        } else if (kind == "block") {
            spec.blocks.emplace_back(row.fields[1], parse_count(row.fields[2], path, row.number));
        } else if (kind == "freq") {
            Sex sex = sex_from_string(row.fields[1]);
            Race race = race_from_string(row.fields[2]);
            Ethnicity eth = ethnicity_from_string(row.fields[3]);
            Age age = static_cast<Age>(parse_count(row.fields[4], path, row.number));
            spec.cell_age_freq[{sex, race, eth}][age] +=
                parse_count(row.fields[5], path, row.number);
        } else if (kind == "pin") {
            Sex sex = sex_from_string(row.fields[2]);
            Race race = race_from_string(row.fields[3]);
            Ethnicity eth = ethnicity_from_string(row.fields[4]);
            spec.explicit_counts[{row.fields[1], sex, race, eth}] =
                parse_count(row.fields[5], path, row.number);
        } else {
            throw std::runtime_error(path.string() + ":" + std::to_string(row.number) +
                                     ": unknown row kind '" + kind + "'");
        }
    }
    return spec;
}

void write_population(const std::filesystem::path& path, const Population& pop,
                      const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "person_id,tract,block,sex,age,race,ethnicity\n";
    for (const PersonRecord& rec : pop.records)
        w.stream() << rec.person_id << "," << rec.geo.tract << "," << rec.geo.block << ","
                   << to_string(rec.sex) << "," << rec.age << "," << to_string(rec.race) << ","
                   << to_string(rec.ethnicity) << "\n";
    w.commit();
}

Population read_population(const std::filesystem::path& path) {
    Population pop;
    for (const Line& row : read_rows(path, 7)) {
        PersonRecord rec;
        rec.person_id = row.fields[0];
        rec.geo = {row.fields[1], row.fields[2]};
        rec.sex = sex_from_string(row.fields[3]);
        rec.age = static_cast<Age>(parse_count(row.fields[4], path, row.number));
        rec.race = race_from_string(row.fields[5]);
        rec.ethnicity = ethnicity_from_string(row.fields[6]);
        pop.records.push_back(std::move(rec));
    }
    return pop;
}

void write_external(const std::filesystem::path& path,
                    const std::vector<ExternalRecord>& records, const std::string& tract,
                    const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "ext_id,tract,block,sex,age\n";
    for (const ExternalRecord& rec : records)
        w.stream() << rec.ext_id << "," << (rec.geo.tract.empty() ? tract : rec.geo.tract)
                   << "," << rec.geo.block << "," << to_string(rec.sex) << "," << rec.age
                   << "\n";
    w.commit();
}

std::vector<ExternalRecord> read_external(const std::filesystem::path& path) {
    std::vector<ExternalRecord> out;
    for (const Line& row : read_rows(path, 5)) {
        ExternalRecord rec;
        rec.ext_id = row.fields[0];
        rec.geo = {row.fields[1], row.fields[2]};
        rec.sex = sex_from_string(row.fields[3]);
        rec.age = static_cast<Age>(parse_count(row.fields[4], path, row.number));
        out.push_back(std::move(rec));
    }
    return out;
}

void write_tables(const std::filesystem::path& dir, const ReleasedTables& tables,
                  const Provenance& meta) {
    std::filesystem::create_directories(dir);
    Provenance full = meta;
    full.emplace_back("tract", tables.tract.tract);
    full.emplace_back("fidelity",
                      tables.fidelity == Fidelity::Full ? "full" : "census");

    {
        AtomicWriter w(dir / "tract.csv");
        write_meta(w.stream(), full);
        w.stream() << "sex,age,race,ethnicity,count\n";
        for (const auto& [key, count] : tables.tract.counts) {
            const auto& [sex, age, race, eth] = key;
            w.stream() << to_string(sex) << "," << age << "," << to_string(race) << ","
                       << to_string(eth) << "," << count << "\n";
        }
        w.commit();
    }
    {
        AtomicWriter w(dir / "block_grouped.csv");
        write_meta(w.stream(), full);
        w.stream() << "block,sex,age_group,race,ethnicity,count\n";
        for (const auto& [key, count] : tables.block_grouped.counts) {
            const auto& [block, sex, group, race, eth] = key;
            w.stream() << block << "," << to_string(sex) << "," << tables.scheme.label(group)
                       << "," << to_string(race) << ","
                       << (eth ? std::string(to_string(*eth)) : std::string(kPooledToken))
                       << "," << count << "\n";
        }
        w.commit();
    }
    {
        AtomicWriter w(dir / "block_race_eth.csv");
        write_meta(w.stream(), full);
        w.stream() << "block,race,ethnicity,count\n";
        for (const auto& [key, count] : tables.block_race_eth.counts) {
            const auto& [block, race, eth] = key;
            w.stream() << block << "," << to_string(race) << "," << to_string(eth) << ","
                       << count << "\n";
        }
        w.commit();
    }
}

ReleasedTables read_tables(const std::filesystem::path& dir) {
    ReleasedTables tables;

    // Fidelity and tract come from the provenance comments of tract.csv.
    {
        std::ifstream in(dir / "tract.csv");
        if (!in) throw std::runtime_error("cannot open " + (dir / "tract.csv").string());
        std::string line;
        while (std::getline(in, line) && !line.empty() && line[0] == '#') {
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            std::string key = line.substr(2, eq - 2);
            std::string value = line.substr(eq + 1);
            if (key == "tract") tables.tract.tract = value;
            if (key == "fidelity")
                tables.fidelity = value == "census" ? Fidelity::CensusLike : Fidelity::Full;
        }
    }

    auto tract_path = dir / "tract.csv";
    for (const Line& row : read_rows(tract_path, 5)) {
        Sex sex = sex_from_string(row.fields[0]);
        Age age = static_cast<Age>(parse_count(row.fields[1], tract_path, row.number));
        Race race = race_from_string(row.fields[2]);
        Ethnicity eth = ethnicity_from_string(row.fields[3]);
        tables.tract.counts[{sex, age, race, eth}] =
            parse_count(row.fields[4], tract_path, row.number);
    }

    auto grouped_path = dir / "block_grouped.csv";
    for (const Line& row : read_rows(grouped_path, 6)) {
        Sex sex = sex_from_string(row.fields[1]);
        auto group = tables.scheme.group_from_label(row.fields[2]);
        if (!group)
            throw std::runtime_error(grouped_path.string() + ":" +
                                     std::to_string(row.number) + ": unknown age group '" +
                                     row.fields[2] + "'");
        Race race = race_from_string(row.fields[3]);
        std::optional<Ethnicity> eth;
        if (row.fields[4] != kPooledToken) eth = ethnicity_from_string(row.fields[4]);
        tables.block_grouped.counts[{row.fields[0], sex, *group, race, eth}] =
            parse_count(row.fields[5], grouped_path, row.number);
    }

    auto re_path = dir / "block_race_eth.csv";
    for (const Line& row : read_rows(re_path, 4)) {
        Race race = race_from_string(row.fields[1]);
        Ethnicity eth = ethnicity_from_string(row.fields[2]);
        tables.block_race_eth.counts[{row.fields[0], race, eth}] =
            parse_count(row.fields[3], re_path, row.number);
    }
    return tables;
}

void write_reconstruction(const std::filesystem::path& path, const Reconstruction& recon,
                          const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "row_id,tract,block,sex,age,race,ethnicity\n";
    for (const ReconRow& row : recon.rows)
        w.stream() << row.row_id << "," << recon.tract << "," << row.block << ","
                   << to_string(row.sex) << "," << row.age << "," << to_string(row.race) << ","
                   << to_string(row.ethnicity) << "\n";
    w.commit();
}

void write_matches(const std::filesystem::path& path, const std::vector<MatchRun>& runs,
                   const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "run,row_id,ext_id,pass\n";
    for (const MatchRun& run : runs)
        for (const MatchOutcome& o : run.outcomes) {
            w.stream() << run.reconstruction_index << "," << o.row_id << ",";
            if (o.matched())
                w.stream() << *o.ext_id << "," << to_string(*o.pass);
            else
                w.stream() << ",";
            w.stream() << "\n";
        }
    w.commit();
}

void write_stability_report(const std::filesystem::path& path, const StabilityReport& report,
                            const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    auto& os = w.stream();
    os << "statistic,bin,value\n";
    for (std::size_t i = 0; i < report.modal_histogram.size(); ++i)
        os << "modal_identity_count," << (i + 1) << "," << report.modal_histogram[i] << "\n";
    for (std::size_t i = 0; i < report.distinct_histogram.size(); ++i)
        os << "distinct_identity_count," << (i + 1) << "," << report.distinct_histogram[i]
           << "\n";
    os << "pairwise_agreement,min," << report.agreement_min << "\n";
    os << "pairwise_agreement,mean," << report.agreement_mean << "\n";
    os << "pairwise_agreement,max," << report.agreement_max << "\n";
    w.commit();
}

void write_designation_matrix(const std::filesystem::path& path,
                              const std::vector<DesignationMatrix>& matrices,
                              const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "block,ext_id,run,race,ethnicity\n";
    for (const DesignationMatrix& m : matrices)
        for (std::size_t i = 0; i < m.ext_ids.size(); ++i)
            for (std::size_t j = 0; j < m.entries[i].size(); ++j) {
                w.stream() << m.block << "," << m.ext_ids[i] << "," << j << ",";
                if (m.entries[i][j])
                    w.stream() << to_string(m.entries[i][j]->first) << ","
                               << to_string(m.entries[i][j]->second);
                else
                    w.stream() << ",";
                w.stream() << "\n";
            }
    w.commit();
}

void write_refutation_reports(const std::filesystem::path& path,
                              const std::vector<RefutationReport>& reports,
                              const Provenance& meta) {
    AtomicWriter w(path);
    write_meta(w.stream(), meta);
    w.stream() << "block,kind,race,ethnicity,row_id,identities,ever_unmatched\n";
    for (const RefutationReport& report : reports)
        for (const RefutationEntry& entry : report.entries) {
            w.stream() << report.block << ","
                       << (report.kind == RefutationKind::Row ? "row" : "category") << ","
                       << to_string(report.race) << "," << to_string(report.ethnicity) << ",";
            if (entry.row_id >= 0) w.stream() << entry.row_id;
            w.stream() << ",";
            for (std::size_t i = 0; i < entry.identities.size(); ++i)
                w.stream() << (i ? ";" : "") << entry.identities[i];
            w.stream() << "," << (entry.ever_unmatched ? "yes" : "no") << "\n";
        }
    w.commit();
}

}  // namespace reidlab::csv
