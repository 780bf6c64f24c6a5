#include "doctest.h"

#include <sstream>

#include "lbeam/property_checks.hpp"

using namespace lbeam;

TEST_CASE("randomized invariant suite passes on a fresh seed") {
    const PropertySuiteReport report = run_property_checks(40, 2024);
    CHECK_EQ(report.instances, 40);
    CHECK_EQ(report.margin_instances, 40);
    CHECK_GT(report.margin_pairs_checked, 0);
    CHECK_GT(report.seconds, 0.0);
    CHECK(report.all_passed());

    CHECK_LE(report.max_pair_residual_rel, 1e-8);
    CHECK_LE(report.max_unity_gap, 1e-10);
    CHECK_LE(report.max_rank_tail, 1e-10);
    CHECK_EQ(report.ordering_violations, 0);
    CHECK_LE(report.max_spectrum_gap, 1e-8);
    CHECK_LE(report.max_slnr_original_gap, 1e-8);
    CHECK_LE(report.max_slnr_proposed_gap, 1e-8);
    CHECK_EQ(report.slnr_relaxation_violations, 0);
    CHECK_LE(report.max_l1_parallel_gap, 1e-8);
    CHECK_EQ(report.margin_violations, 0);

    // Determinism: the same seed reproduces every residual bit for bit.
    const PropertySuiteReport again = run_property_checks(40, 2024);
    CHECK_EQ(report.max_pair_residual_rel, again.max_pair_residual_rel);
    CHECK_EQ(report.max_unity_gap, again.max_unity_gap);
    CHECK_EQ(report.max_spectrum_gap, again.max_spectrum_gap);
    CHECK_EQ(report.max_slnr_proposed_gap, again.max_slnr_proposed_gap);
}

TEST_CASE("report prints one verdict per invariant") {
    const PropertySuiteReport report = run_property_checks(8, 5);
    std::ostringstream out;
    print_property_report(report, out);
    const std::string text = out.str();
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("overall: PASS") != std::string::npos);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("random precoders do not beat the closed-form SLNR maximizer") {
    const SlnrSearchReport report = run_slnr_search(3, 50, 11);
    CHECK_EQ(report.instances, 3);
    CHECK_EQ(report.draws_per_instance, 50);
    CHECK_EQ(report.violations, 0);
    CHECK_LE(report.max_excess, 1e-8);
}
