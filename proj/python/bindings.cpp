#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sphd/energy.hpp"
#include "sphd/experiments.hpp"
#include "sphd/geometry.hpp"
#include "sphd/partition.hpp"
#include "sphd/pointsets.hpp"
#include "sphd/quality.hpp"
#include "sphd/specfun.hpp"

#include <sstream>

namespace py = pybind11;
using namespace sphd;

namespace {

py::list points_as_list(const PointSet& pts) {
    py::list rows;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        auto p = pts.point(i);
        py::list row;
        for (double v : p) row.append(v);
        rows.append(row);
    }
    return rows;
}

PointSet points_from_rows(int d, const std::vector<std::vector<double>>& rows,
                          const std::string& label) {
    std::vector<double> flat;
    for (const auto& r : rows)
        flat.insert(flat.end(), r.begin(), r.end());
    return PointSet(d, std::move(flat), label);
}

py::dict energy_report_dict(const EnergyReport& r) {
    py::dict d;
    d["value"] = r.value;
    d["leading_term"] = r.leading_term;
    d["remainder"] = r.remainder;
    d["remainder_scaled"] = r.remainder_scaled;
    return d;
}

} // namespace

PYBIND11_MODULE(_sphd, m) {
    m.doc() = "sphere energies, equal-area partitions, design certification";

    py::class_<PointSet>(m, "PointSet")
        .def(py::init(&points_from_rows), py::arg("d"), py::arg("rows"),
             py::arg("label") = std::string())
        .def_property_readonly("d", &PointSet::dim)
        .def("__len__", &PointSet::size)
        .def_property_readonly("label", &PointSet::label)
        .def("rows", &points_as_list);

    py::class_<Partition>(m, "Partition")
        .def_readonly("d", &Partition::d)
        .def_readonly("n", &Partition::n)
        .def("cell_areas", [](const Partition& p) {
            std::vector<double> out;
            for (const auto& c : p.cells) out.push_back(cell_area(c, p.d));
            return out;
        })
        .def("cell_diameters", [](const Partition& p) {
            std::vector<double> out;
            for (const auto& c : p.cells) out.push_back(cell_diameter(c, p.d));
            return out;
        });

    m.def("uniform_sphere", &uniform_sphere, py::arg("d"), py::arg("n"),
          py::arg("seed"));
    m.def("fibonacci_sphere", &fibonacci_sphere, py::arg("n"));
    m.def("fixture", &fixture, py::arg("name"));
    m.def("load_points", &load_points, py::arg("path"), py::arg("d"));
    m.def("save_points",
          [](const std::string& path, const PointSet& p) { save_points(path, p); },
          py::arg("path"), py::arg("points"));

    m.def("separation", [](const PointSet& p) {
        auto r = separation(p);
        py::dict d;
        d["min_distance"] = r.min_distance;
        d["c1_hat"] = r.c1_hat;
        d["argmin"] = py::make_tuple(r.argmin_i, r.argmin_j);
        d["duplicate_warning"] = r.duplicate_warning;
        return d;
    });

    m.def("eq_partition", &eq_partition, py::arg("d"), py::arg("n"));
    m.def("jittered_sample", &jittered_sample, py::arg("partition"), py::arg("seed"));

    m.def("riesz_energy",
          [](const PointSet& p, double s, int threads) {
              return energy_report_dict(riesz_energy(p, s, threads));
          },
          py::arg("points"), py::arg("s"), py::arg("threads") = 0);
    m.def("riesz_energy_offdiag",
          [](const PointSet& p, double s, int threads) {
              return energy_report_dict(
                  kernel_energy_offdiag(p, KernelSpec::riesz(p.dim(), s), threads));
          },
          py::arg("points"), py::arg("s"), py::arg("threads") = 0);

    m.def("v_d", &v_d, py::arg("d"), py::arg("s"));
    m.def("v_d_second", &v_d_second, py::arg("d"), py::arg("s"));
    m.def("v_d_closed_form", &v_d_closed_form, py::arg("d"), py::arg("s"));
    m.def("v_d_gamma_ratio_form", &v_d_gamma_ratio_form, py::arg("d"), py::arg("s"));

    m.def("legendre_pnd", &legendre_pnd, py::arg("d"), py::arg("n"), py::arg("x"));
    m.def("zdim", &zdim, py::arg("d"), py::arg("ell"));
    m.def("h_t_eval", &h_t_eval, py::arg("d"), py::arg("s"), py::arg("bigk"),
          py::arg("t"), py::arg("x"));
    m.def("r_t_eval", &r_t_eval, py::arg("d"), py::arg("s"), py::arg("bigk"),
          py::arg("t"), py::arg("x"), py::arg("tol") = 1e-10);

    m.def("design_defect",
          [](const PointSet& p, int t, double tol, int threads) {
              auto c = design_defect(p, t, tol, threads);
              py::dict d;
              d["t_checked"] = c.t_checked;
              d["defects"] = c.defects;
              d["certified_t"] = c.certified_t;
              d["tol"] = c.tol;
              return d;
          },
          py::arg("points"), py::arg("t"), py::arg("tol") = 1e-10,
          py::arg("threads") = 0);

    auto wce_dict = [](const WceResult& r) {
        py::dict d;
        d["wce_squared"] = r.wce_squared;
        d["truncation_degree"] = r.truncation_degree;
        d["tail_bound"] = r.tail_bound;
        d["space"] = r.space;
        d["parameter"] = r.parameter;
        return d;
    };
    m.def("wce_sobolev",
          [wce_dict](const PointSet& p, double s, double tol, int threads,
                     unsigned max_degree) {
              return wce_dict(wce_sobolev(p, s, tol, threads, max_degree));
          },
          py::arg("points"), py::arg("s"), py::arg("tol") = 1e-6,
          py::arg("threads") = 0, py::arg("max_degree") = 0);
    m.def("wce_logspace",
          [wce_dict](const PointSet& p, double gamma, double tol, int threads,
                     unsigned max_degree) {
              return wce_dict(wce_logspace(p, gamma, tol, threads, max_degree));
          },
          py::arg("points"), py::arg("gamma"), py::arg("tol") = 1e-6,
          py::arg("threads") = 0, py::arg("max_degree") = 0);

    m.def("run_sweep",
          [](const py::dict& kw) {
              TrialPlan plan;
              if (kw.contains("d")) plan.d = kw["d"].cast<int>();
              if (kw.contains("n_list"))
                  plan.n_list = kw["n_list"].cast<std::vector<std::size_t>>();
              if (kw.contains("trials"))
                  plan.trials = kw["trials"].cast<std::size_t>();
              if (kw.contains("seed"))
                  plan.master_seed = kw["seed"].cast<std::uint64_t>();
              if (kw.contains("family"))
                  plan.family = family_from_name(kw["family"].cast<std::string>());
              if (kw.contains("metric"))
                  plan.metric = metric_from_name(kw["metric"].cast<std::string>());
              if (kw.contains("s")) plan.s = kw["s"].cast<double>();
              if (kw.contains("gamma")) plan.gamma = kw["gamma"].cast<double>();
              if (kw.contains("t")) plan.t = kw["t"].cast<int>();
              if (kw.contains("threads")) plan.threads = kw["threads"].cast<int>();
              SweepTable table = run_sweep(plan);
              py::list rows;
              for (const auto& r : table.rows) {
                  py::dict row;
                  row["N"] = r.n;
                  row["mean"] = r.mean;
                  row["stderr"] = r.stderr_;
                  row["trials"] = r.trials;
                  rows.append(row);
              }
              py::dict out;
              out["rows"] = rows;
              out["meta"] = table.meta;
              return out;
          },
          py::arg("plan"));

    m.def("fit_exponent",
          [](const std::vector<std::pair<double, double>>& points) {
              SweepTable table;
              for (auto [n, v] : points)
                  table.rows.push_back({static_cast<std::size_t>(n), v, 0.0, 1});
              auto f = fit_exponent(table, {}, false);
              py::dict d;
              d["slope"] = f.slope;
              d["intercept"] = f.intercept;
              d["r_squared"] = f.r_squared;
              d["slope_stderr"] = f.slope_stderr;
              return d;
          },
          py::arg("points"));
}
