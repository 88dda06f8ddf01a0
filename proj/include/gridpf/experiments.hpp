#pragma once

#include <cstdint>
#include <vector>

#include "gridpf/switching.hpp"

namespace gridpf {

struct LoadScenario {
    std::vector<double> pd, qd;  // MW, MVAr per bus
    uint64_t seed = 0;
    double scale_fraction = 0.0;  // drawn total demand / total pmax
};

// Stable per-sample seed derivation; independent of thread scheduling.
uint64_t sample_seed(uint64_t base_seed, int sample_index);

// Total demand drawn uniform in [0.3, 0.85] of in-service pmax, per-bus
// multipliers uniform in [0.8, 1.2], then rescaled to the drawn total.
// Reactive demand keeps each bus's baseline qd/pd ratio (pure-reactive buses
// scale by the global factor). Deterministic in (case, seed).
LoadScenario sample_scenario(const NetworkCase& nc, uint64_t seed);

// Proportional dispatch between unit limits: pg_i = pmin_i + lambda *
// (pmax_i - pmin_i), one lambda in [0, 1] targeting sum(pd) * (1 +
// loss_margin). MW per generator, zeros for out-of-service units.
std::vector<double> dispatch_generation(const NetworkCase& nc,
                                        const LoadScenario& scenario,
                                        double loss_margin = 0.02);

// Copy of the case with scenario demand and dispatched generation applied.
NetworkCase apply_scenario(const NetworkCase& nc, const LoadScenario& scenario,
                           const std::vector<double>& pg);

// One (sample, mode) outcome, reduced to what the statistics need. The
// statistics track the two violation classes a dispatcher answers for,
// generator reactive limits and load-bus voltage bands; excursions at
// demoted generators stay visible in per-run reports but are the accepted
// price of a switch, not a headline number.
struct SampleRecord {
    bool normal_exit = false;  // loop ended without a divergence fallback
    bool usable = false;    // normal exit on a converged solve; enters averages
    bool feasible = false;  // usable with no gen-Q and no load-V violations left
    int gen_q_count = 0, gen_v_count = 0, load_v_count = 0;
    int switchable_gen_q = 0;
    double v_magnitude = 0.0;  // sum of load-bus |V| exceedances
    int ppqv_switches = 0, q_switches = 0, resolved = 0;
    int outer_iterations = 0;
    double wall_time = 0.0;
};

struct ModeStatistics {
    SwitchMode mode = SwitchMode::baseline;
    double feasible_pct = 0.0;
    double avg_q_violations = 0.0;  // generator reactive violations
    double avg_v_violations = 0.0;  // load-bus voltage violations
    double avg_v_magnitude = 0.0;   // summed load-bus |V| exceedance
    // vs baseline, over samples whose baseline converged; NaN when baseline
    // itself or no comparable samples.
    double pct_v_count_improvement = 0.0;
    double pct_v_magnitude_improvement = 0.0;
    // resolved load-V violations per P-PQV switch, over samples with >= 1
    // switch; NaN when no sample switched.
    double switch_ratio = 0.0;
    double avg_time = 0.0;  // seconds
    double avg_outer_iterations = 0.0;
    int n_usable = 0;
    std::vector<double> per_sample_v_magnitude;  // usable samples, sample order
};

struct HistogramRow {
    SwitchMode mode;
    double bin_low = 0.0, bin_high = 0.0;  // bin_high = inf on the overflow row
    int count = 0;
};

struct BatchStatistics {
    int n_samples = 0;
    uint64_t base_seed = 0;
    std::vector<ModeStatistics> rows;  // one per requested mode, request order
    std::vector<HistogramRow> histogram;
    std::vector<SampleRecord> records;  // n_samples * modes, sample-major
    int n_modes() const { return static_cast<int>(rows.size()); }
};

struct BatchOptions {
    OuterOptions outer;
    int jobs = 1;
    int histogram_bins = 20;
};

// Runs every requested mode on each sampled scenario from the identical
// starting point. Sample i uses seed (base_seed, i); results are independent
// of the parallelism degree.
BatchStatistics run_batch(const NetworkCase& nc, int n_samples,
                          const std::vector<SwitchMode>& modes,
                          uint64_t base_seed, const BatchOptions& options);

// Fixed-width bins over [0, max finite per-sample total]; diverged samples
// land in a final overflow row so per-mode counts always sum to n_samples.
std::vector<HistogramRow> violation_histogram(const BatchStatistics& stats,
                                              int bins);

}  // namespace gridpf
