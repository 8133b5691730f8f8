#include "sphd/energy.hpp"
#include "sphd/experiments.hpp"
#include "sphd/geometry.hpp"
#include "sphd/partition.hpp"
#include "sphd/pointsets.hpp"
#include "sphd/quality.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

namespace {

constexpr const char* kVersion = "sphd 1.0.0";

using ConfigMap = std::map<std::string, std::string>;

nlohmann::json config_json(const ConfigMap& cfg) {
    nlohmann::json j;
    for (const auto& [k, v] : cfg) j[k] = v;
    j["version"] = kVersion;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot open output file: " + path);
    f << text;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

sphd::PointSet generate(const std::string& family, int d, std::size_t n,
                        std::uint64_t seed) {
    if (family == "fibonacci") return sphd::fibonacci_sphere(n);
    if (family == "uniform") return sphd::uniform_sphere(d, n, seed);
    if (family == "jittered")
        return sphd::jittered_sample(sphd::eq_partition(d, n), seed);
    return sphd::fixture(family); // named fixtures, including cross_polytope(d)
}

int cmd_gen(const std::string& family, int d, std::size_t n, std::uint64_t seed,
            const std::string& out) {
    sphd::PointSet pts = generate(family, d, n, seed);
    std::ostringstream os;
    os << "# tool=" << kVersion << "\n";
    os << "# family=" << family << "\n";
    os << "# d=" << pts.dim() << "\n";
    os << "# n=" << pts.size() << "\n";
    os << "# seed=" << seed << "\n";
    sphd::save_points(os, pts);
    write_text(out, os.str());
    return 0;
}

int cmd_certify(const std::string& in, int d, int t, double tol, int threads,
                const std::string& out) {
    sphd::PointSet pts = sphd::load_points(in, d);
    auto cert = sphd::design_defect(pts, t, tol, threads);
    nlohmann::json j;
    j["config"] = config_json({{"in", in},
                               {"d", std::to_string(d)},
                               {"t", std::to_string(t)},
                               {"tol", fmt(tol)}});
    j["certificate"] = nlohmann::json::parse(cert.to_json());
    if (pts.size() >= 2) {
        auto sep = sphd::separation(pts);
        j["separation"] = {{"min_distance", sep.min_distance},
                           {"c1_hat", sep.c1_hat},
                           {"argmin_i", sep.argmin_i},
                           {"argmin_j", sep.argmin_j},
                           {"duplicate_warning", sep.duplicate_warning}};
    }
    write_text(out, j.dump(2) + "\n");
    return 0;
}

int cmd_energy(const std::string& in, int d, const std::string& metric, double s,
               double gamma, double tol, int threads, const std::string& out) {
    nlohmann::json j;
    ConfigMap cfg{{"metric", metric}, {"d", std::to_string(d)}};
    if (metric == "vd") {
        cfg["s"] = fmt(s);
        j["config"] = config_json(cfg);
        double quad = sphd::v_d(d, s);
        double second = sphd::v_d_second(d, s);
        double closed = sphd::v_d_closed_form(d, s);
        double gr = sphd::v_d_gamma_ratio_form(d, s);
        j["v_d"] = {{"quadrature", quad},
                    {"second_scheme", second},
                    {"closed_form", closed},
                    {"gamma_ratio_form", gr},
                    {"scheme_disagreement", std::abs(quad - second)},
                    {"gamma_ratio_deviation", std::abs(quad - gr)}};
        write_text(out, j.dump(2) + "\n");
        return 0;
    }

    sphd::PointSet pts = sphd::load_points(in, d);
    cfg["in"] = in;
    if (metric == "riesz" || metric == "riesz-offdiag" || metric == "wce-sobolev")
        cfg["s"] = fmt(s);
    if (metric == "wce-logspace") cfg["gamma"] = fmt(gamma);
    j["config"] = config_json(cfg);

    if (metric == "riesz") {
        auto rep = sphd::riesz_energy(pts, s, threads);
        j["report"] = nlohmann::json::parse(rep.to_json());
    } else if (metric == "riesz-offdiag") {
        auto rep = sphd::kernel_energy_offdiag(pts, sphd::KernelSpec::riesz(d, s),
                                               threads);
        j["report"] = nlohmann::json::parse(rep.to_json());
    } else if (metric == "wce-sobolev") {
        auto res = sphd::wce_sobolev(pts, s, tol, threads);
        j["report"] = nlohmann::json::parse(res.to_json());
    } else if (metric == "wce-logspace") {
        auto res = sphd::wce_logspace(pts, gamma, tol, threads);
        j["report"] = nlohmann::json::parse(res.to_json());
    } else {
        throw std::invalid_argument("unknown energy metric: " + metric);
    }
    write_text(out, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sphere energies, design certification, and jittered-sampling "
                 "experiments"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    int d = 2;
    double s = 1.0, gamma = 1.0, tol = 1e-10;
    int t = 1, bigk = 0, threads = 0;
    std::size_t n = 0, trials = 0;
    std::uint64_t seed = 0;
    std::string family, metric, in_path, in2_path, out_path, plan_path, json_path;
    std::string n_list_text, transform = "raw";

    auto* gen = app.add_subcommand("gen", "write a point set file");
    gen->add_option("--family", family, "octahedron|cube|icosahedron|"
                                        "cross_polytope(d)|simplex(d)|fibonacci|"
                                        "uniform|jittered")
        ->required();
    gen->add_option("--n", n, "number of points");
    gen->add_option("--d", d, "sphere dimension");
    gen->add_option("--seed", seed, "random seed");
    gen->add_option("--out", out_path, "output file (default stdout)");

    auto* certify = app.add_subcommand("certify", "t-design defect and separation");
    certify->add_option("--in", in_path, "point file")->required();
    certify->add_option("--d", d, "sphere dimension");
    certify->add_option("--t", t, "largest degree to check")->required();
    certify->add_option("--tol", tol, "defect tolerance");
    certify->add_option("--threads", threads, "worker threads (0 = auto)");
    certify->add_option("--out", out_path, "output file (default stdout)");

    auto* energy = app.add_subcommand("energy", "energy or worst-case-error value");
    energy->add_option("--in", in_path, "point file (not needed for --metric vd)");
    energy->add_option("--d", d, "sphere dimension");
    energy
        ->add_option("--metric", metric,
                     "riesz|riesz-offdiag|wce-sobolev|wce-logspace|vd")
        ->required();
    energy->add_option("--s", s, "Riesz / Sobolev parameter");
    energy->add_option("--gamma", gamma, "log-space parameter");
    energy->add_option("--tol", tol, "series tolerance");
    energy->add_option("--threads", threads, "worker threads (0 = auto)");
    energy->add_option("--out", out_path, "output file (default stdout)");

    auto* experiment = app.add_subcommand("experiment", "run an N-sweep");
    experiment->add_option("--plan", plan_path, "key=value plan file");
    experiment->add_option("--d", d, "sphere dimension");
    experiment->add_option("--n-list", n_list_text, "comma-separated N values");
    experiment->add_option("--trials", trials, "trials per N");
    experiment->add_option("--seed", seed, "master seed");
    experiment->add_option("--family", family,
                           "jittered|uniform|fibonacci|minimizer|file-sequence");
    experiment->add_option("--metric", metric,
                           "riesz|riesz-offdiag|kernel|kernel-offdiag|"
                           "wce-sobolev|wce-logspace|defect");
    experiment->add_option("--s", s, "Riesz / Sobolev parameter");
    experiment->add_option("--gamma", gamma, "log-space parameter");
    experiment->add_option("--t", t, "defect degree");
    experiment->add_option("--bigk", bigk, "expansion order (accepted, unused here)");
    experiment->add_option("--threads", threads, "worker threads (0 = auto)");
    experiment->add_option("--out", out_path, "CSV output (default stdout)");
    experiment->add_option("--json", json_path, "also write the table as JSON");

    auto* fit = app.add_subcommand("fit", "power-law exponent of a sweep table");
    fit->add_option("--in", in_path, "sweep CSV")->required();
    fit->add_option("--transform", transform,
                    "raw|abs-remainder-half|abs-remainder-offdiag|divide-log");
    fit->add_option("--d", d, "sphere dimension (fallback if absent from CSV)");
    fit->add_option("--s", s, "Riesz parameter (fallback if absent from CSV)");
    fit->add_flag("--keep-smallest", "include the smallest N in the fit");
    fit->add_option("--out", out_path, "output file (default stdout)");

    auto* compare = app.add_subcommand("compare", "deterministic vs probabilistic");
    compare->add_option("--in", in_path, "deterministic sweep CSV")->required();
    compare->add_option("--in2", in2_path, "probabilistic sweep CSV")->required();
    compare->add_option("--out", out_path, "output file (default stdout)");
    compare->add_option("--json", json_path, "also write the report as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_gen(family, d, n, seed, out_path);
        if (certify->parsed())
            return cmd_certify(in_path, d, t, tol, threads, out_path);
        if (energy->parsed())
            return cmd_energy(in_path, d, metric, s, gamma, tol, threads, out_path);

        if (experiment->parsed()) {
            sphd::TrialPlan plan;
            if (!plan_path.empty()) {
                std::ifstream pf(plan_path);
                if (!pf)
                    throw std::runtime_error("cannot open plan file: " + plan_path);
                plan = sphd::TrialPlan::from_key_values(pf);
            }
            // explicit flags override plan-file values
            if (experiment->count("--d")) plan.d = d;
            if (experiment->count("--n-list")) {
                plan.n_list.clear();
                std::istringstream is(n_list_text);
                std::string item;
                while (std::getline(is, item, ','))
                    if (!item.empty()) plan.n_list.push_back(std::stoull(item));
            }
            if (experiment->count("--trials")) plan.trials = trials;
            if (experiment->count("--seed")) plan.master_seed = seed;
            if (experiment->count("--family"))
                plan.family = sphd::family_from_name(family);
            if (experiment->count("--metric"))
                plan.metric = sphd::metric_from_name(metric);
            if (experiment->count("--s")) plan.s = s;
            if (experiment->count("--gamma")) plan.gamma = gamma;
            if (experiment->count("--t")) plan.t = t;
            if (experiment->count("--threads")) plan.threads = threads;

            sphd::SweepTable table = sphd::run_sweep(plan);
            std::ostringstream os;
            table.write_csv(os);
            write_text(out_path, os.str());
            if (!json_path.empty()) write_text(json_path, table.to_json() + "\n");
            return 0;
        }

        if (fit->parsed()) {
            std::ifstream f(in_path);
            if (!f) throw std::runtime_error("cannot open sweep file: " + in_path);
            sphd::SweepTable table = sphd::SweepTable::read_csv(f);
            int td = d;
            double ts = s;
            if (auto it = table.meta.find("d"); it != table.meta.end())
                td = std::stoi(it->second);
            if (auto it = table.meta.find("s"); it != table.meta.end())
                ts = std::stod(it->second);

            std::function<double(double, double)> tf;
            if (transform == "raw") {
                tf = {};
            } else if (transform == "abs-remainder-half") {
                double v = sphd::v_d(td, ts);
                tf = [v](double nn, double mean) {
                    return std::abs(mean - 0.5 * v * nn * nn);
                };
            } else if (transform == "abs-remainder-offdiag") {
                double v = sphd::v_d(td, ts);
                tf = [v](double nn, double mean) {
                    return std::abs(nn * nn * mean - v * nn * nn);
                };
            } else if (transform == "divide-log") {
                tf = [](double nn, double mean) { return mean / std::log(nn); };
            } else {
                throw std::invalid_argument("unknown transform: " + transform);
            }
            auto res =
                sphd::fit_exponent(table, tf, fit->count("--keep-smallest") == 0);
            nlohmann::json j;
            j["config"] = config_json({{"in", in_path}, {"transform", transform}});
            j["fit"] = nlohmann::json::parse(res.to_json());
            write_text(out_path, j.dump(2) + "\n");
            return 0;
        }

        if (compare->parsed()) {
            std::ifstream fa(in_path), fb(in2_path);
            if (!fa) throw std::runtime_error("cannot open sweep file: " + in_path);
            if (!fb) throw std::runtime_error("cannot open sweep file: " + in2_path);
            auto ta = sphd::SweepTable::read_csv(fa);
            auto tb = sphd::SweepTable::read_csv(fb);
            auto rep = sphd::compare_report(ta, tb);
            write_text(out_path, rep.to_text());
            if (!json_path.empty()) write_text(json_path, rep.to_json() + "\n");
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
