#include "sphd/experiments.hpp"

#include "sphd/numerics.hpp"
#include "sphd/pointsets.hpp"
#include "sphd/quality.hpp"
#include "sphd/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sphd {

Family family_from_name(const std::string& name) {
    if (name == "jittered") return Family::Jittered;
    if (name == "uniform" || name == "uniform-random") return Family::UniformRandom;
    if (name == "fibonacci") return Family::Fibonacci;
    if (name == "file-sequence") return Family::FileSequence;
    if (name == "minimizer") return Family::Minimizer;
    throw std::invalid_argument("unknown family: " + name);
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Jittered: return "jittered";
        case Family::UniformRandom: return "uniform-random";
        case Family::Fibonacci: return "fibonacci";
        case Family::FileSequence: return "file-sequence";
        case Family::Minimizer: return "minimizer";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    if (name == "riesz") return Metric::Riesz;
    if (name == "riesz-offdiag") return Metric::RieszOffdiag;
    if (name == "kernel") return Metric::Kernel;
    if (name == "kernel-offdiag") return Metric::KernelOffdiag;
    if (name == "wce-sobolev") return Metric::WceSobolev;
    if (name == "wce-logspace") return Metric::WceLogspace;
    if (name == "defect") return Metric::Defect;
    throw std::invalid_argument("unknown metric: " + name);
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::Riesz: return "riesz";
        case Metric::RieszOffdiag: return "riesz-offdiag";
        case Metric::Kernel: return "kernel";
        case Metric::KernelOffdiag: return "kernel-offdiag";
        case Metric::WceSobolev: return "wce-sobolev";
        case Metric::WceLogspace: return "wce-logspace";
        case Metric::Defect: return "defect";
    }
    return "?";
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join_n_list(const std::vector<std::size_t>& ns) {
    std::string out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(ns[i]);
    }
    return out;
}

std::vector<std::size_t> parse_n_list(const std::string& text) {
    std::vector<std::size_t> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoull(item));
    }
    return out;
}

bool deterministic_family(Family f) {
    return f == Family::Fibonacci || f == Family::Minimizer ||
           f == Family::FileSequence;
}

// The coefficient kernel used by the generic kernel metrics: the reproducing
// kernel weights (1 + ell(ell+d-1))^{-s} Z(d,ell) truncated at degree 300.
KernelSpec sobolev_coefficient_kernel(int d, double s) {
    const unsigned L = 300;
    std::vector<double> a(L + 1, 0.0);
    for (unsigned ell = 1; ell <= L; ++ell) {
        double lam = static_cast<double>(ell) * (ell + d - 1.0);
        a[ell] = std::pow(1.0 + lam, -s) * zdim_real(d, static_cast<double>(ell));
    }
    return KernelSpec::coefficients(d, std::move(a));
}

std::string pattern_path(const std::string& pattern, std::size_t n) {
    std::string out = pattern;
    auto pos = out.find("{N}");
    if (pos == std::string::npos)
        throw std::invalid_argument("file_pattern needs a {N} placeholder");
    out.replace(pos, 3, std::to_string(n));
    return out;
}

double eval_metric(const TrialPlan& plan, const PointSet& pts, int threads) {
    switch (plan.metric) {
        case Metric::Riesz:
            return riesz_energy(pts, plan.s, threads).value;
        case Metric::RieszOffdiag:
            return kernel_energy_offdiag(pts, KernelSpec::riesz(plan.d, plan.s), threads)
                .value;
        case Metric::Kernel:
            return kernel_energy(pts, sobolev_coefficient_kernel(plan.d, plan.s),
                                 threads)
                .value;
        case Metric::KernelOffdiag:
            return kernel_energy_offdiag(
                       pts, sobolev_coefficient_kernel(plan.d, plan.s), threads)
                .value;
        case Metric::WceSobolev:
            return wce_sobolev(pts, plan.s, 1e-6, threads).wce_squared;
        case Metric::WceLogspace:
            return wce_logspace(pts, plan.gamma, 1e-6, threads).wce_squared;
        case Metric::Defect: {
            auto cert = design_defect(pts, plan.t, 1e-10, threads);
            return *std::max_element(cert.defects.begin(), cert.defects.end());
        }
    }
    return 0.0;
}

PointSet make_trial_points(const TrialPlan& plan, std::size_t n,
                           const Partition* part, std::size_t trial) {
    switch (plan.family) {
        case Family::Jittered:
            return jittered_sample(*part, derive_seed(plan.master_seed, trial));
        case Family::UniformRandom:
            return uniform_sphere(plan.d, n, derive_seed(plan.master_seed, trial));
        case Family::Fibonacci:
            if (plan.d != 2)
                throw std::invalid_argument("fibonacci family requires d = 2");
            return fibonacci_sphere(n);
        case Family::Minimizer: {
            if (plan.d != 2)
                throw std::invalid_argument("minimizer family requires d = 2");
            MinimizeOptions opt;
            opt.s = plan.s;
            opt.steps = plan.minimizer_steps;
            return riesz_minimize(fibonacci_sphere(n), opt);
        }
        case Family::FileSequence:
            return load_points(pattern_path(plan.file_pattern, n), plan.d);
    }
    throw std::logic_error("unreachable family");
}

// mean and standard error over trials with counter-derived seeds; trials are
// evaluated in parallel but folded in a fixed order.
std::pair<double, double> trial_stats(const TrialPlan& plan, std::size_t n,
                                      const Partition* part, std::size_t trials) {
    if (trials == 1) {
        PointSet pts = make_trial_points(plan, n, part, 0);
        return {eval_metric(plan, pts, plan.threads), 0.0};
    }
    auto sums = parallel_block_vsum(
        trials, 1, plan.threads, 2,
        [&](std::size_t, std::size_t lo, std::size_t hi, double* out) {
            CompensatedSum sv, sq;
            for (std::size_t k = lo; k < hi; ++k) {
                PointSet pts = make_trial_points(plan, n, part, k);
                double v = eval_metric(plan, pts, 1);
                sv.add(v);
                sq.add(v * v);
            }
            out[0] = sv.value();
            out[1] = sq.value();
        });
    double m = static_cast<double>(trials);
    double mean = sums[0] / m;
    double var = (sums[1] - m * mean * mean) / (m - 1.0);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / m)};
}

} // namespace

std::pair<double, double> jitter_expectation(const KernelSpec& kernel,
                                             const Partition& partition,
                                             std::size_t trials,
                                             std::uint64_t master_seed, bool offdiag,
                                             int threads) {
    if (trials < 1)
        throw std::invalid_argument("jitter_expectation: requires trials >= 1");
    if (kernel.singular() && !offdiag)
        throw std::invalid_argument(
            "jitter_expectation: singular kernel requires offdiag");
    auto sums = parallel_block_vsum(
        trials, 1, threads, 2,
        [&](std::size_t, std::size_t lo, std::size_t hi, double* out) {
            CompensatedSum sv, sq;
            for (std::size_t k = lo; k < hi; ++k) {
                PointSet pts = jittered_sample(partition, derive_seed(master_seed, k));
                double v = offdiag ? kernel_energy_offdiag(pts, kernel, 1).value
                                   : kernel_energy(pts, kernel, 1).value;
                sv.add(v);
                sq.add(v * v);
            }
            out[0] = sv.value();
            out[1] = sq.value();
        });
    double m = static_cast<double>(trials);
    double mean = sums[0] / m;
    if (trials == 1) return {mean, 0.0};
    double var = (sums[1] - m * mean * mean) / (m - 1.0);
    if (var < 0.0) var = 0.0;
    return {mean, std::sqrt(var / m)};
}

SweepTable run_sweep(const TrialPlan& plan) {
    if (plan.n_list.empty())
        throw std::invalid_argument("run_sweep: empty N list");
    if (plan.trials < 1)
        throw std::invalid_argument("run_sweep: requires trials >= 1");
    if (plan.family == Family::FileSequence && plan.file_pattern.empty())
        throw std::invalid_argument("run_sweep: file-sequence needs file_pattern");

    SweepTable table;
    {
        std::istringstream echo(plan.to_key_values());
        std::string line;
        while (std::getline(echo, line)) {
            auto eq = line.find('=');
            if (eq != std::string::npos)
                table.meta[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }

    std::vector<std::size_t> ns = plan.n_list;
    std::sort(ns.begin(), ns.end());
    for (std::size_t n : ns) {
        std::size_t trials = deterministic_family(plan.family) ? 1 : plan.trials;
        Partition part;
        if (plan.family == Family::Jittered)
            part = eq_partition(plan.d, n);
        auto [mean, se] = trial_stats(plan, n, &part, trials);
        table.rows.push_back({n, mean, se, trials});
    }
    return table;
}

std::string TrialPlan::to_key_values() const {
    std::ostringstream os;
    os << "d=" << d << "\n";
    os << "n_list=" << join_n_list(n_list) << "\n";
    os << "trials=" << trials << "\n";
    os << "seed=" << master_seed << "\n";
    os << "family=" << family_name(family) << "\n";
    os << "metric=" << metric_name(metric) << "\n";
    os << "s=" << fmt_double(s) << "\n";
    os << "gamma=" << fmt_double(gamma) << "\n";
    os << "t=" << t << "\n";
    os << "minimizer_steps=" << minimizer_steps << "\n";
    if (!file_pattern.empty()) os << "file_pattern=" << file_pattern << "\n";
    os << "threads=" << threads << "\n";
    return os.str();
}

TrialPlan TrialPlan::from_key_values(std::istream& is) {
    TrialPlan plan;
    std::string line;
    while (std::getline(is, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("plan line without '=': " + line);
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        if (key == "d") plan.d = std::stoi(val);
        else if (key == "n_list") plan.n_list = parse_n_list(val);
        else if (key == "trials") plan.trials = std::stoull(val);
        else if (key == "seed") plan.master_seed = std::stoull(val);
        else if (key == "family") plan.family = family_from_name(val);
        else if (key == "metric") plan.metric = metric_from_name(val);
        else if (key == "s") plan.s = std::stod(val);
        else if (key == "gamma") plan.gamma = std::stod(val);
        else if (key == "t") plan.t = std::stoi(val);
        else if (key == "minimizer_steps") plan.minimizer_steps = std::stoull(val);
        else if (key == "file_pattern") plan.file_pattern = val;
        else if (key == "threads") plan.threads = std::stoi(val);
        else throw std::invalid_argument("unknown plan key: " + key);
    }
    return plan;
}

void SweepTable::write_csv(std::ostream& os) const {
    for (const auto& [k, v] : meta)
        os << "# " << k << "=" << v << "\n";
    os << "N,mean,stderr,trials\n";
    for (const auto& r : rows)
        os << r.n << "," << fmt_double(r.mean) << "," << fmt_double(r.stderr_) << ","
           << r.trials << "\n";
}

SweepTable SweepTable::read_csv(std::istream& is) {
    SweepTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(is, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' '))
            line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            std::size_t start = body.find_first_not_of(' ');
            if (start == std::string::npos) continue;
            body = body.substr(start);
            auto eq = body.find('=');
            if (eq != std::string::npos)
                table.meta[body.substr(0, eq)] = body.substr(eq + 1);
            continue;
        }
        if (!header_seen) {
            if (line.rfind("N,", 0) != 0)
                throw std::invalid_argument("sweep csv: missing header line");
            header_seen = true;
            continue;
        }
        SweepRow row;
        std::istringstream ls(line);
        std::string tok;
        std::getline(ls, tok, ',');
        row.n = std::stoull(tok);
        std::getline(ls, tok, ',');
        row.mean = std::stod(tok);
        std::getline(ls, tok, ',');
        row.stderr_ = std::stod(tok);
        std::getline(ls, tok, ',');
        row.trials = std::stoull(tok);
        table.rows.push_back(row);
    }
    if (!header_seen)
        throw std::invalid_argument("sweep csv: no header found");
    return table;
}

std::string SweepTable::to_json() const {
    nlohmann::json j;
    j["meta"] = meta;
    j["rows"] = nlohmann::json::array();
    for (const auto& r : rows)
        j["rows"].push_back({{"N", r.n},
                             {"mean", r.mean},
                             {"stderr", r.stderr_},
                             {"trials", r.trials}});
    return j.dump(2);
}

FitResult fit_exponent(const SweepTable& table,
                       const std::function<double(double, double)>& transform,
                       bool drop_smallest) {
    std::vector<double> lx, ly;
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (drop_smallest && i == 0 && table.rows.size() > 3) continue;
        const auto& r = table.rows[i];
        double nn = static_cast<double>(r.n);
        double y = transform ? transform(nn, r.mean) : r.mean;
        if (!(y > 0.0) || !std::isfinite(y)) continue;
        lx.push_back(std::log(nn));
        ly.push_back(std::log(y));
        used.push_back(i);
    }
    if (lx.size() < 3)
        throw std::invalid_argument("fit_exponent: fewer than 3 usable rows");

    double m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
    }
    double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double dx = lx[i] - mx, dy = ly[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    FitResult fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.used_rows = used;
    double ssr = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        fit.residuals.push_back(r);
        ssr += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ssr / syy : 1.0;
    if (fit.r_squared < 0.0) fit.r_squared = 0.0;
    if (lx.size() > 2 && sxx > 0.0)
        fit.slope_stderr = std::sqrt(ssr / (m - 2.0) / sxx);
    return fit;
}

std::string FitResult::to_json() const {
    nlohmann::json j;
    j["slope"] = slope;
    j["intercept"] = intercept;
    j["r_squared"] = r_squared;
    j["slope_stderr"] = slope_stderr;
    j["residuals"] = residuals;
    j["used_rows"] = used_rows;
    return j.dump(2);
}

CompareReport compare_report(const SweepTable& deterministic,
                             const SweepTable& probabilistic) {
    auto mit = deterministic.meta.find("metric");
    auto pit = probabilistic.meta.find("metric");
    if (mit != deterministic.meta.end() && pit != probabilistic.meta.end() &&
        mit->second != pit->second)
        throw std::invalid_argument("compare_report: metric mismatch");
    if (deterministic.rows.size() != probabilistic.rows.size())
        throw std::invalid_argument("compare_report: N lists differ in length");

    CompareReport rep;
    for (std::size_t i = 0; i < deterministic.rows.size(); ++i) {
        if (deterministic.rows[i].n != probabilistic.rows[i].n)
            throw std::invalid_argument("compare_report: N lists differ");
        rep.n_list.push_back(deterministic.rows[i].n);
        rep.det_values.push_back(deterministic.rows[i].mean);
        rep.prob_values.push_back(probabilistic.rows[i].mean);
        double p = probabilistic.rows[i].mean;
        rep.ratios.push_back(p != 0.0 ? deterministic.rows[i].mean / p
                                      : std::numeric_limits<double>::infinity());
    }
    rep.det_fit = fit_exponent(deterministic);
    rep.prob_fit = fit_exponent(probabilistic);
    double margin = 2.0 * (rep.det_fit.slope_stderr + rep.prob_fit.slope_stderr);
    double diff = rep.det_fit.slope - rep.prob_fit.slope;
    if (std::abs(diff) <= margin)
        rep.verdict = "comparable";
    else if (diff < 0.0)
        rep.verdict = "deterministic better"; // faster decay / slower growth
    else
        rep.verdict = "probabilistic better";
    return rep;
}

std::string CompareReport::to_text() const {
    std::ostringstream os;
    os << "N            deterministic      probabilistic      ratio\n";
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%-12zu %-18.10g %-18.10g %.6g\n", n_list[i],
                      det_values[i], prob_values[i], ratios[i]);
        os << buf;
    }
    char fits[256];
    std::snprintf(fits, sizeof fits,
                  "fitted exponents: deterministic %.4f (+/- %.4f), probabilistic "
                  "%.4f (+/- %.4f)\n",
                  det_fit.slope, det_fit.slope_stderr, prob_fit.slope,
                  prob_fit.slope_stderr);
    os << fits;
    os << "verdict: " << verdict << "\n";
    return os.str();
}

std::string CompareReport::to_json() const {
    nlohmann::json j;
    j["N"] = n_list;
    j["deterministic"] = det_values;
    j["probabilistic"] = prob_values;
    j["ratios"] = ratios;
    j["det_fit"] = nlohmann::json::parse(det_fit.to_json());
    j["prob_fit"] = nlohmann::json::parse(prob_fit.to_json());
    j["verdict"] = verdict;
    return j.dump(2);
}

} // namespace sphd
