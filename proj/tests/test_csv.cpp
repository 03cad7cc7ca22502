#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "reidlab/csv.hpp"
#include "reidlab/synthgen.hpp"

using namespace reidlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("reidlab_csv_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("population CSV round-trip") {
    TempDir tmp;
    auto [pop, _] = fixture_tract501();
    csv::write_population(tmp.path / "pop.csv", pop, {{"seed", "0"}});
    Population back = csv::read_population(tmp.path / "pop.csv");
    CHECK(back.records == pop.records);
}

TEST_CASE("external CSV round-trip") {
    TempDir tmp;
    auto [pop, _] = fixture_tract501();
    auto ext = derive_external_file(pop);
    csv::write_external(tmp.path / "ext.csv", ext, "5.01");
    CHECK(csv::read_external(tmp.path / "ext.csv") == ext);
}

TEST_CASE("released tables round-trip in both fidelities") {
    TempDir tmp;
    auto [pop, _] = fixture_tract501();
    for (Fidelity f : {Fidelity::Full, Fidelity::CensusLike}) {
        ReleasedTables tables = tabulate(pop, f);
        csv::write_tables(tmp.path / "tables", tables);
        ReleasedTables back = csv::read_tables(tmp.path / "tables");
        CHECK(back == tables);
    }
}

TEST_CASE("population spec CSV round-trip regenerates the same population") {
    TempDir tmp;
    auto [_, spec] = fixture_tract501();
    csv::write_spec(tmp.path / "spec.csv", spec);
    PopulationSpec back = csv::read_spec(tmp.path / "spec.csv");
    CHECK(back.tract == spec.tract);
    CHECK(back.cell_age_freq == spec.cell_age_freq);
    CHECK(back.explicit_counts == spec.explicit_counts);
    CHECK(generate_population(back, 3).records == generate_population(spec, 3).records);
}

TEST_CASE("malformed rows are reported with a line number") {
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "bad.csv");
        out << "person_id,tract,block,sex,age,race,ethnicity\n";
        out << "P1,5.01,1000,Male,notanumber,White,NotHispanic\n";
    }
    CHECK_THROWS_WITH_AS(csv::read_population(tmp.path / "bad.csv"),
                         doctest::Contains(":2"), std::runtime_error);

    {
        std::ofstream out(tmp.path / "short.csv");
        out << "person_id,tract,block,sex,age,race,ethnicity\n";
        out << "P1,5.01,1000\n";
    }
    CHECK_THROWS_AS(csv::read_population(tmp.path / "short.csv"), std::runtime_error);
}
