#include "gridpf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <thread>

namespace gridpf {

namespace {

// splitmix64 over (base, index): a stable, well-spread per-sample seed that
// does not depend on how samples are distributed over threads
uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void parallel_for(int n, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    const int workers = std::min(jobs, n);
    pool.reserve(workers);
    for (int j = 0; j < workers; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double total_pmax(const NetworkCase& nc) {
    double s = 0.0;
    for (const GenRecord& g : nc.gens)
        if (g.status) s += g.pmax;
    return s;
}

}  // namespace

uint64_t sample_seed(uint64_t base_seed, int sample_index) {
    return mix(mix(base_seed) ^ static_cast<uint64_t>(sample_index));
}

LoadScenario sample_scenario(const NetworkCase& nc, uint64_t seed) {
    const int n = nc.n_bus();
    double pd_total = 0.0;
    for (const BusRecord& b : nc.buses) pd_total += b.pd;
    if (pd_total <= 0.0)
        throw CaseError("case has no real demand to perturb");
    const double pmax = total_pmax(nc);
    if (pmax <= 0.0) throw CaseError("case has no generation capacity");

    std::seed_seq sseq{static_cast<uint32_t>(seed),
                       static_cast<uint32_t>(seed >> 32)};
    std::mt19937_64 rng(sseq);
    std::uniform_real_distribution<double> total_dist(0.3, 0.85);
    std::uniform_real_distribution<double> jitter(0.8, 1.2);

    LoadScenario sc;
    sc.seed = seed;
    sc.scale_fraction = total_dist(rng);
    const double target = sc.scale_fraction * pmax;

    sc.pd.assign(n, 0.0);
    sc.qd.assign(n, 0.0);
    std::vector<double> mult(n, 0.0);
    double jittered_total = 0.0;
    for (int k = 0; k < n; ++k) {
        if (nc.buses[k].pd == 0.0) continue;
        mult[k] = jitter(rng);
        jittered_total += mult[k] * nc.buses[k].pd;
    }
    const double rescale = target / jittered_total;
    const double global = target / pd_total;
    for (int k = 0; k < n; ++k) {
        const BusRecord& b = nc.buses[k];
        if (b.pd != 0.0) {
            sc.pd[k] = rescale * mult[k] * b.pd;
            sc.qd[k] = sc.pd[k] * (b.qd / b.pd);
        } else {
            sc.qd[k] = b.qd * global;  // pure-reactive bus
        }
    }
    return sc;
}

std::vector<double> dispatch_generation(const NetworkCase& nc,
                                        const LoadScenario& scenario,
                                        double loss_margin) {
    double pd_total = 0.0;
    for (double v : scenario.pd) pd_total += v;
    double pmin_sum = 0.0, pmax_sum = 0.0;
    for (const GenRecord& g : nc.gens) {
        if (!g.status) continue;
        pmin_sum += g.pmin;
        pmax_sum += g.pmax;
    }
    const double target = pd_total * (1.0 + loss_margin);
    if (target > pmax_sum)
        throw CaseError("dispatch target exceeds total generation capacity");
    double lambda = 0.0;
    if (pmax_sum > pmin_sum)
        lambda = std::clamp((target - pmin_sum) / (pmax_sum - pmin_sum), 0.0,
                            1.0);
    std::vector<double> pg(nc.gens.size(), 0.0);
    for (size_t i = 0; i < nc.gens.size(); ++i) {
        const GenRecord& g = nc.gens[i];
        if (!g.status) continue;
        pg[i] = g.pmin + lambda * (g.pmax - g.pmin);
    }
    return pg;
}

NetworkCase apply_scenario(const NetworkCase& nc, const LoadScenario& scenario,
                           const std::vector<double>& pg) {
    NetworkCase out = nc;
    for (int k = 0; k < nc.n_bus(); ++k) {
        out.buses[k].pd = scenario.pd[k];
        out.buses[k].qd = scenario.qd[k];
    }
    for (size_t i = 0; i < out.gens.size(); ++i) out.gens[i].pg = pg[i];
    return out;
}

namespace {

SampleRecord reduce(const SwitchingResult& r, const BusTypeAssignment& a) {
    SampleRecord rec;
    // a run whose last solve diverged hands back a best-effort prior iterate;
    // that state is for inspection, not for the averages. only runs that
    // finished on their own converged solve enter the statistics.
    rec.normal_exit = !r.first_diverged && !r.used_fallback;
    rec.usable =
        rec.normal_exit && r.final_status == SolveStatus::converged;
    // statistics count generator reactive and load voltage exceedances; a
    // demoted generator's excursion is the accepted cost of its switch and
    // shows up in the per-run report, not in the batch figures
    rec.feasible = rec.usable && r.final_report.gen_q.empty() &&
                   r.final_report.load_v.empty();
    rec.gen_q_count = static_cast<int>(r.final_report.gen_q.size());
    rec.gen_v_count = static_cast<int>(r.final_report.gen_v.size());
    rec.load_v_count = static_cast<int>(r.final_report.load_v.size());
    rec.switchable_gen_q = r.final_report.switchable_gen_q_count(a);
    rec.v_magnitude = r.final_report.load_v_magnitude();
    rec.ppqv_switches = r.ppqv_switches;
    rec.q_switches = r.q_switches;
    rec.resolved = r.resolved_v_violations;
    rec.outer_iterations = r.outer_iterations;
    rec.wall_time = r.wall_time;
    return rec;
}

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

}  // namespace

BatchStatistics run_batch(const NetworkCase& nc, int n_samples,
                          const std::vector<SwitchMode>& modes,
                          uint64_t base_seed, const BatchOptions& options) {
    if (n_samples < 1) throw CaseError("n_samples must be >= 1");
    if (modes.empty()) throw CaseError("no modes requested");
    const int n_modes = static_cast<int>(modes.size());

    // demand and dispatch never touch branch data, so one electrical model
    // serves every sample
    const AdmittanceMatrix y = build_ybus(nc);
    const Topology topo = adjacency(nc);

    BatchStatistics stats;
    stats.n_samples = n_samples;
    stats.base_seed = base_seed;
    stats.records.assign(static_cast<size_t>(n_samples) * n_modes,
                         SampleRecord{});

    parallel_for(n_samples, options.jobs, [&](int i) {
        const LoadScenario scen = sample_scenario(nc, sample_seed(base_seed, i));
        const std::vector<double> pg = dispatch_generation(nc, scen);
        const NetworkCase sc = apply_scenario(nc, scen, pg);
        for (int m = 0; m < n_modes; ++m) {
            const SwitchingResult r =
                run_with_switching(sc, y, topo, modes[m], options.outer);
            stats.records[static_cast<size_t>(i) * n_modes + m] =
                reduce(r, r.final_assignment);
        }
    });

    // aggregation is sequential and index-ordered: results do not depend on
    // the parallelism degree
    int baseline_slot = -1;
    for (int m = 0; m < n_modes; ++m)
        if (modes[m] == SwitchMode::baseline) baseline_slot = m;

    for (int m = 0; m < n_modes; ++m) {
        ModeStatistics row;
        row.mode = modes[m];
        int feasible = 0, usable = 0;
        long long vcount = 0, qcount = 0;
        double vmag = 0.0, time_sum = 0.0;
        long long outer_sum = 0;
        long long resolved_sum = 0, switch_sum = 0;
        double base_vcount = 0.0, base_vmag = 0.0, mode_vcount = 0.0,
               mode_vmag = 0.0;
        int paired = 0;
        for (int i = 0; i < n_samples; ++i) {
            const SampleRecord& rec =
                stats.records[static_cast<size_t>(i) * n_modes + m];
            time_sum += rec.wall_time;
            outer_sum += rec.outer_iterations;
            if (rec.feasible) ++feasible;
            if (rec.usable) {
                ++usable;
                qcount += rec.gen_q_count;
                vcount += rec.load_v_count;
                vmag += rec.v_magnitude;
                row.per_sample_v_magnitude.push_back(rec.v_magnitude);
            }
            if (rec.ppqv_switches > 0) {
                resolved_sum += rec.resolved;
                switch_sum += rec.ppqv_switches;
            }
            if (baseline_slot >= 0 && baseline_slot != m) {
                const SampleRecord& base =
                    stats.records[static_cast<size_t>(i) * n_modes +
                                  baseline_slot];
                if (base.usable && rec.usable) {
                    ++paired;
                    base_vcount += base.load_v_count;
                    base_vmag += base.v_magnitude;
                    mode_vcount += rec.load_v_count;
                    mode_vmag += rec.v_magnitude;
                }
            }
        }
        row.n_usable = usable;
        row.feasible_pct = 100.0 * feasible / n_samples;
        row.avg_q_violations = usable ? double(qcount) / usable : kNaN;
        row.avg_v_violations = usable ? double(vcount) / usable : kNaN;
        row.avg_v_magnitude = usable ? vmag / usable : kNaN;
        row.avg_time = time_sum / n_samples;
        row.avg_outer_iterations = double(outer_sum) / n_samples;
        row.switch_ratio =
            switch_sum > 0 ? double(resolved_sum) / switch_sum : kNaN;
        if (baseline_slot >= 0 && baseline_slot != m && paired > 0 &&
            base_vcount > 0.0)
            row.pct_v_count_improvement =
                100.0 * (base_vcount - mode_vcount) / base_vcount;
        else
            row.pct_v_count_improvement = kNaN;
        if (baseline_slot >= 0 && baseline_slot != m && paired > 0 &&
            base_vmag > 0.0)
            row.pct_v_magnitude_improvement =
                100.0 * (base_vmag - mode_vmag) / base_vmag;
        else
            row.pct_v_magnitude_improvement = kNaN;
        stats.rows.push_back(std::move(row));
    }

    stats.histogram = violation_histogram(stats, options.histogram_bins);
    return stats;
}

std::vector<HistogramRow> violation_histogram(const BatchStatistics& stats,
                                              int bins) {
    if (bins < 1) bins = 1;
    const int n_modes = stats.n_modes();
    double max_total = 0.0;
    for (const auto& row : stats.rows)
        for (double v : row.per_sample_v_magnitude)
            max_total = std::max(max_total, v);
    const double width = max_total > 0.0 ? max_total / bins : 1.0;

    std::vector<HistogramRow> out;
    for (int m = 0; m < n_modes; ++m) {
        std::vector<int> counts(bins, 0);
        int overflow = 0;  // samples with no usable state
        for (int i = 0; i < stats.n_samples; ++i) {
            const SampleRecord& rec =
                stats.records[static_cast<size_t>(i) * n_modes + m];
            if (!rec.usable) {
                ++overflow;
                continue;
            }
            int b = static_cast<int>(rec.v_magnitude / width);
            counts[std::min(b, bins - 1)] += 1;
        }
        for (int b = 0; b < bins; ++b)
            out.push_back(HistogramRow{stats.rows[m].mode, b * width,
                                       (b + 1) * width, counts[b]});
        out.push_back(HistogramRow{stats.rows[m].mode, bins * width,
                                   std::numeric_limits<double>::infinity(),
                                   overflow});
    }
    return out;
}

}  // namespace gridpf
