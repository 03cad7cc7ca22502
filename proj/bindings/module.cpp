#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "reidlab/analyze.hpp"
#include "reidlab/csv.hpp"
#include "reidlab/reconstruct.hpp"
#include "reidlab/reid.hpp"
#include "reidlab/synthgen.hpp"
#include "reidlab/tabulate.hpp"

namespace py = pybind11;
using namespace reidlab;

namespace {

py::object to_py_int(const AssignmentCount& v) {
    // Route through the decimal string so arbitrary-precision counts survive.
    return py::int_(py::str(v.str()));
}

}  // namespace

PYBIND11_MODULE(reidlab, m) {
    m.doc() = "Reconstruction / reidentification attack laboratory for census-style tables";

    py::enum_<Sex>(m, "Sex").value("Male", Sex::Male).value("Female", Sex::Female);
    py::enum_<Race>(m, "Race")
        .value("White", Race::White)
        .value("Black", Race::Black)
        .value("AIAN", Race::AIAN)
        .value("Asian", Race::Asian)
        .value("NHPI", Race::NHPI)
        .value("Other", Race::Other)
        .value("TwoOrMore", Race::TwoOrMore);
    py::enum_<Ethnicity>(m, "Ethnicity")
        .value("Hispanic", Ethnicity::Hispanic)
        .value("NotHispanic", Ethnicity::NotHispanic);
    py::enum_<Fidelity>(m, "Fidelity")
        .value("Full", Fidelity::Full)
        .value("CensusLike", Fidelity::CensusLike);

    py::class_<GeoId>(m, "GeoId")
        .def(py::init<std::string, std::string>(), py::arg("tract"), py::arg("block"))
        .def_readwrite("tract", &GeoId::tract)
        .def_readwrite("block", &GeoId::block);

    py::class_<PersonRecord>(m, "PersonRecord")
        .def(py::init<>())
        .def_readwrite("person_id", &PersonRecord::person_id)
        .def_readwrite("geo", &PersonRecord::geo)
        .def_readwrite("sex", &PersonRecord::sex)
        .def_readwrite("age", &PersonRecord::age)
        .def_readwrite("race", &PersonRecord::race)
        .def_readwrite("ethnicity", &PersonRecord::ethnicity);

    py::class_<Population>(m, "Population")
        .def(py::init<>())
        .def_readwrite("records", &Population::records)
        .def("__len__", [](const Population& p) { return p.records.size(); });

    py::class_<Violation>(m, "Violation")
        .def_readonly("subject", &Violation::subject)
        .def_readonly("rule", &Violation::rule)
        .def("__repr__", [](const Violation& v) { return v.subject + ": " + v.rule; });

    py::class_<PopulationSpec>(m, "PopulationSpec")
        .def_readonly("tract", &PopulationSpec::tract)
        .def_readonly("blocks", &PopulationSpec::blocks)
        .def("total_persons", &PopulationSpec::total_persons);

    py::class_<ReleasedTables>(m, "ReleasedTables")
        .def_readonly("fidelity", &ReleasedTables::fidelity)
        .def("tract_count",
             [](const ReleasedTables& t, Sex s, Age a, Race r, Ethnicity e) {
                 return t.tract.at(s, a, r, e);
             })
        .def("__eq__", [](const ReleasedTables& a, const ReleasedTables& b) { return a == b; });

    py::class_<CellProblem>(m, "CellProblem")
        .def_readonly("sex", &CellProblem::sex)
        .def_readonly("group", &CellProblem::group)
        .def_readonly("race", &CellProblem::race)
        .def_readonly("ethnicity", &CellProblem::ethnicity)
        .def_readonly("age_freq", &CellProblem::age_freq)
        .def_readonly("block_slots", &CellProblem::block_slots)
        .def("total_slots", &CellProblem::total_slots);

    py::class_<ReconRow>(m, "ReconRow")
        .def_readonly("row_id", &ReconRow::row_id)
        .def_readonly("block", &ReconRow::block)
        .def_readonly("sex", &ReconRow::sex)
        .def_readonly("age", &ReconRow::age)
        .def_readonly("race", &ReconRow::race)
        .def_readonly("ethnicity", &ReconRow::ethnicity);

    py::class_<Reconstruction>(m, "Reconstruction")
        .def_readonly("tract", &Reconstruction::tract)
        .def_readonly("rows", &Reconstruction::rows)
        .def_readonly("seed", &Reconstruction::seed)
        .def_readonly("index", &Reconstruction::index);

    py::class_<ExternalRecord>(m, "ExternalRecord")
        .def(py::init<>())
        .def_readwrite("ext_id", &ExternalRecord::ext_id)
        .def_readwrite("geo", &ExternalRecord::geo)
        .def_readwrite("sex", &ExternalRecord::sex)
        .def_readwrite("age", &ExternalRecord::age);

    py::class_<MatchOutcome>(m, "MatchOutcome")
        .def_readonly("row_id", &MatchOutcome::row_id)
        .def_readonly("ext_id", &MatchOutcome::ext_id)
        .def("matched", &MatchOutcome::matched);

    py::class_<MatchRun>(m, "MatchRun")
        .def_readonly("reconstruction_index", &MatchRun::reconstruction_index)
        .def_readonly("outcomes", &MatchRun::outcomes)
        .def_readonly("putative_rate", &MatchRun::putative_rate);

    py::class_<RateSummary>(m, "RateSummary")
        .def_readonly("rates", &RateSummary::rates)
        .def_readonly("min", &RateSummary::min)
        .def_readonly("max", &RateSummary::max)
        .def_readonly("mean", &RateSummary::mean);

    py::class_<IdentityMatrix>(m, "IdentityMatrix")
        .def_readonly("row_ids", &IdentityMatrix::row_ids)
        .def_readonly("entries", &IdentityMatrix::entries);

    py::class_<StabilityReport>(m, "StabilityReport")
        .def_readonly("modal_counts", &StabilityReport::modal_counts)
        .def_readonly("modal_histogram", &StabilityReport::modal_histogram)
        .def_readonly("distinct_counts", &StabilityReport::distinct_counts)
        .def_readonly("distinct_histogram", &StabilityReport::distinct_histogram)
        .def_readonly("agreement_min", &StabilityReport::agreement_min)
        .def_readonly("agreement_mean", &StabilityReport::agreement_mean)
        .def_readonly("agreement_max", &StabilityReport::agreement_max);

    py::class_<DesignationMatrix>(m, "DesignationMatrix")
        .def_readonly("block", &DesignationMatrix::block)
        .def_readonly("ext_ids", &DesignationMatrix::ext_ids)
        .def_readonly("entries", &DesignationMatrix::entries);

    m.def("fixture_tract501", &fixture_tract501,
          "Paper-pinned 338-person Tract 5.01 fixture and its spec");
    m.def("generate_population", &generate_population, py::arg("spec"), py::arg("seed"));
    m.def("validate_population", &validate_population);
    m.def("derive_external_file", &derive_external_file);

    m.def("tabulate",
          [](const Population& pop, Fidelity f) { return tabulate(pop, f); },
          py::arg("pop"), py::arg("fidelity") = Fidelity::Full);
    m.def("check_consistency", &check_consistency);

    m.def("build_cells",
          [](const ReleasedTables& tables) { return build_cells(tables).exact; });
    m.def("reconstruct", &reconstruct, py::arg("tables"), py::arg("seed"));
    m.def("reconstruct_batch", &reconstruct_batch, py::arg("tables"), py::arg("base_seed"),
          py::arg("runs"));
    m.def("count_assignments",
          [](const CellProblem& cell) { return to_py_int(count_assignments(cell)); });
    m.def("count_partial",
          [](long n, long k) { return to_py_int(count_partial(n, k)); });
    m.def("enumerate_assignments",
          [](const CellProblem& cell, long limit) {
              return enumerate_assignments(cell, AssignmentCount(limit));
          },
          py::arg("cell"), py::arg("limit") = 1000000L);

    m.def("match_reconstruction", &match_reconstruction);
    m.def("putative_rate_batch", &putative_rate_batch);

    m.def("identity_matrix", &identity_matrix);
    m.def("stability_report", &stability_report, py::arg("matrix"), py::arg("block_sizes"));
    m.def("designation_matrix", &designation_matrix);
    m.def("singleton_match_probability", &singleton_match_probability);
    m.def("binomial_pmf", &binomial_pmf);
    m.def("expected_high_agreement", &expected_high_agreement);

    m.def("read_population", &csv::read_population);
    m.def("write_population",
          [](const std::filesystem::path& p, const Population& pop) {
              csv::write_population(p, pop);
          });
}
