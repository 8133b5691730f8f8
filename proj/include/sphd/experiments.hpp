#pragma once

#include "sphd/energy.hpp"
#include "sphd/geometry.hpp"
#include "sphd/partition.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace sphd {

enum class Family { Jittered, UniformRandom, Fibonacci, FileSequence, Minimizer };
enum class Metric {
    Riesz,         // pairwise-half energy
    RieszOffdiag,  // off-diagonal pair mean
    Kernel,
    KernelOffdiag,
    WceSobolev,
    WceLogspace,
    Defect
};

Family family_from_name(const std::string& name);
Metric metric_from_name(const std::string& name);
std::string family_name(Family f);
std::string metric_name(Metric m);

struct TrialPlan {
    int d = 2;
    std::vector<std::size_t> n_list;
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    Family family = Family::UniformRandom;
    Metric metric = Metric::Riesz;
    double s = 1.0;        // riesz / wce-sobolev parameter
    double gamma = 1.0;    // wce-logspace parameter
    int t = 1;             // defect degree
    std::size_t minimizer_steps = 200;
    std::string file_pattern; // FileSequence: path with {N} placeholder
    int threads = 0;

    std::string to_key_values() const;
    static TrialPlan from_key_values(std::istream& is);
};

struct SweepRow {
    std::size_t n = 0;
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t trials = 0;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    std::map<std::string, std::string> meta; // echoed plan, key=value

    void write_csv(std::ostream& os) const;
    static SweepTable read_csv(std::istream& is);
    std::string to_json() const;
};

// Monte Carlo estimate of the expected kernel energy under one uniform draw
// per partition cell. Trials use counter-derived seeds, so serial and
// parallel execution give identical results.
std::pair<double, double> jitter_expectation(const KernelSpec& kernel,
                                             const Partition& partition,
                                             std::size_t trials,
                                             std::uint64_t master_seed, bool offdiag,
                                             int threads = 0);

SweepTable run_sweep(const TrialPlan& plan);

struct FitResult {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double slope_stderr = 0.0;
    std::vector<double> residuals;       // per used row, in row order
    std::vector<std::size_t> used_rows;  // indices into the table
    std::string to_json() const;
};

// Least-squares line through (ln N, ln y) where y = transform(N, mean);
// rows with nonpositive or non-finite y are excluded. drop_smallest skips the
// first row (pre-asymptotic regime).
FitResult fit_exponent(const SweepTable& table,
                       const std::function<double(double, double)>& transform = {},
                       bool drop_smallest = true);

struct CompareReport {
    std::vector<std::size_t> n_list;
    std::vector<double> det_values, prob_values, ratios;
    FitResult det_fit, prob_fit;
    std::string verdict; // deterministic better | comparable | probabilistic better
    std::string to_text() const;
    std::string to_json() const;
};

CompareReport compare_report(const SweepTable& deterministic,
                             const SweepTable& probabilistic);

} // namespace sphd
