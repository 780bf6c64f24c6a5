#pragma once

#include <cstdint>
#include <iosfwd>

namespace lbeam {

// Randomized invariant suite over N=8, M=3, K=2 channel draws with L cycling
// {1,2,3} and sigma^2 cycling {1e-3, 0.1, 1, 10}: joint-diagonalization
// residuals, gain partition and ordering, rank pattern, the spectrum link
// between the two factorizations, SLNR identities and relaxation, L=1
// precoder parallelism, and (on a same-sized companion loop with L in {2,3})
// the inter-stream margin contraction. Residual fields are normalized by each
// invariant's own denominator, so every "max_*" field compares against its
// limit directly.
struct PropertySuiteReport {
    int instances = 0;
    int margin_instances = 0;

    double max_pair_residual_rel = 0.0;   // limit 1e-8
    double max_unity_gap = 0.0;           // limit 1e-10
    double max_rank_tail = 0.0;           // limit 1e-10
    int ordering_violations = 0;
    double max_spectrum_gap = 0.0;        // limit 1e-8
    double max_slnr_original_gap = 0.0;   // limit 1e-8
    double max_slnr_proposed_gap = 0.0;   // limit 1e-8
    int slnr_relaxation_violations = 0;
    double max_l1_parallel_gap = 0.0;     // limit 1e-8
    int margin_violations = 0;
    long margin_pairs_checked = 0;
    double seconds = 0.0;

    bool all_passed() const;
};

PropertySuiteReport run_property_checks(int instances, std::uint64_t seed);

// Human-readable table of the report with one PASS/FAIL line per invariant.
void print_property_report(const PropertySuiteReport& report, std::ostream& out);

// Random-search optimality probe: per instance, draws unit-power random
// precoders and records any that beat the closed-form original scheme's SLNR
// by more than 1e-8.
struct SlnrSearchReport {
    int instances = 0;
    int draws_per_instance = 0;
    int violations = 0;
    double max_excess = 0.0;  // most positive (random - original) observed
};

SlnrSearchReport run_slnr_search(int instances, int draws_per_instance, std::uint64_t seed);

}  // namespace lbeam
