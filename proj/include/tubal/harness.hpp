#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "tubal/errors.hpp"
#include "tubal/metrics.hpp"
#include "tubal/parallel.hpp"
#include "tubal/rng.hpp"
#include "tubal/solver.hpp"
#include "tubal/synth.hpp"
#include "tubal/tensor_io.hpp"

namespace tubal {

struct PhaseGrid {
    std::vector<int> ranks;
    std::vector<double> sampling_rates;
    int trials = 3;
    double success_threshold = 1e-4;
};

inline void validate(const PhaseGrid& grid) {
    if (grid.ranks.empty() || grid.sampling_rates.empty())
        throw InvalidParam("phase grid: rank and rate lists must be nonempty");
    for (double sr : grid.sampling_rates)
        if (!(sr > 0.0 && sr <= 1.0)) throw InvalidRate("phase grid: rates must lie in (0, 1]");
    if (grid.trials < 1) throw InvalidParam("phase grid: trials must be positive");
}

struct PhaseRow {
    int r;
    double sr;
    std::string spec;
    int trial;
    double rre;
    bool success;
    int iters;
    double seconds;
};

// A labelled solver configuration, e.g. {"hop:0.3", cfg}.
using LabelledConfig = std::pair<std::string, SolverConfig>;

// Runs the completion solver over the (rank, rate, trial) grid for every
// configuration. Ground truth and mask for a cell are derived from
// (seed, r_index, sr_index, trial) only, so results do not depend on the
// execution schedule and all specs see the same instances. Rows come back
// in grid order. Wall-clock timing is off by default to keep the output a
// pure function of (grid, specs, seed).
inline std::vector<PhaseRow> phase_transition(const PhaseGrid& grid, int n,
                                              const std::vector<LabelledConfig>& specs,
                                              std::uint64_t seed, bool measure_timing = false) {
    validate(grid);
    if (specs.empty()) throw InvalidParam("phase_transition: no specs given");
    for (const auto& [label, cfg] : specs) validate(cfg);
    for (int r : grid.ranks)
        if (r < 1 || r > n) throw InvalidParam("phase_transition: rank outside [1, n]");

    struct Task {
        std::size_t row;
        int r_idx, sr_idx, trial, spec_idx;
    };
    std::vector<Task> tasks;
    std::size_t row = 0;
    for (std::size_t ri = 0; ri < grid.ranks.size(); ++ri)
        for (std::size_t si = 0; si < grid.sampling_rates.size(); ++si)
            for (int trial = 0; trial < grid.trials; ++trial)
                for (std::size_t pi = 0; pi < specs.size(); ++pi)
                    tasks.push_back(Task{row++, static_cast<int>(ri), static_cast<int>(si), trial,
                                         static_cast<int>(pi)});

    std::vector<PhaseRow> rows(tasks.size());
    parallel_for(tasks.size(), [&](std::size_t t) {
        const Task& task = tasks[t];
        const int r = grid.ranks[task.r_idx];
        const double sr = grid.sampling_rates[task.sr_idx];
        const std::uint64_t cell = derive_seed(
            seed, {static_cast<std::uint64_t>(task.r_idx), static_cast<std::uint64_t>(task.sr_idx),
                   static_cast<std::uint64_t>(task.trial)});
        const Tensor3 truth = gen_lowrank(n, n, n, r, derive_seed(cell, {0}));
        const Mask mask = random_mask(n, n, n, sr, derive_seed(cell, {1}));
        const Tensor3 x_obs = apply_mask(truth, mask);

        const auto t0 = std::chrono::steady_clock::now();
        const SolveResult res = solve(x_obs, mask, specs[task.spec_idx].second, &truth);
        const auto t1 = std::chrono::steady_clock::now();

        const double err = rre(res.m, truth);
        rows[task.row] = PhaseRow{
            r,
            sr,
            specs[task.spec_idx].first,
            task.trial,
            err,
            err <= grid.success_threshold,
            static_cast<int>(res.trace.rows.size()),
            measure_timing ? std::chrono::duration<double>(t1 - t0).count() : 0.0};
    });
    return rows;
}

// One trace per configuration on a fixed instance, for convergence plots.
inline std::vector<std::pair<std::string, Trace>> convergence_run(
    const Tensor3& truth, const Mask& mask, const std::vector<LabelledConfig>& specs) {
    const Tensor3 x_obs = apply_mask(truth, mask);
    std::vector<std::pair<std::string, Trace>> out;
    out.reserve(specs.size());
    for (const auto& [label, cfg] : specs) {
        SolveResult res = solve(x_obs, mask, cfg, &truth);
        out.emplace_back(label, std::move(res.trace));
    }
    return out;
}

inline void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "iter,rho,rre,chg_m,chg_e,chg_x,p_norm\n";
    for (const TraceRow& r : trace.rows) {
        out << r.iter << ',' << fmt17(r.rho) << ',' << fmt17(r.rre) << ',' << fmt17(r.chg_m)
            << ',' << fmt17(r.chg_e) << ',' << fmt17(r.chg_x) << ',' << fmt17(r.p_norm) << '\n';
    }
}

inline void write_phase_csv(std::ostream& out, const std::vector<PhaseRow>& rows) {
    out << "r,sr,spec,trial,rre,success,iters,seconds\n";
    for (const PhaseRow& r : rows) {
        out << r.r << ',' << fmt17(r.sr) << ',' << r.spec << ',' << r.trial << ','
            << fmt17(r.rre) << ',' << (r.success ? 1 : 0) << ',' << r.iters << ','
            << fmt17(r.seconds) << '\n';
    }
}

inline void write_curve_csv(std::ostream& out, const CurveTable& t) {
    out << "x,soft,hard,hop_p,how,hoc\n";
    for (std::size_t i = 0; i < t.x.size(); ++i) {
        out << fmt17(t.x[i]) << ',' << fmt17(t.soft[i]) << ',' << fmt17(t.hard[i]) << ','
            << fmt17(t.hop_p[i]) << ',' << fmt17(t.how[i]) << ',' << fmt17(t.hoc[i]) << '\n';
    }
}

}  // namespace tubal
