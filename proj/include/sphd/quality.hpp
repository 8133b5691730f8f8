#pragma once

#include "sphd/geometry.hpp"

#include <string>
#include <vector>

namespace sphd {

struct DesignCertificate {
    int t_checked = 0;
    std::vector<double> defects; // D_1 .. D_t
    int certified_t = 0;         // largest t' with D_ell <= tol for all ell <= t'
    double tol = 0.0;
    std::string to_json() const;
};

// Per-degree quadrature residuals D_ell = Z(d,ell) N^{-2} sum_ij P_ell(<x_i,x_j>).
// Nonnegative by the addition theorem; zero through degree t certifies a t-design.
DesignCertificate design_defect(const PointSet& points, int t, double tol = 1e-10,
                                int threads = 0);

struct WceResult {
    double wce_squared = 0.0;
    unsigned truncation_degree = 0;
    double tail_bound = 0.0; // certified bound on the omitted off-diagonal tail
    std::string space;
    double parameter = 0.0; // s or gamma
    std::string to_json() const;
};

// Squared worst-case equal-weight cubature error, from the kernel double sum
// sum_{ell>=1} w_ell Z(d,ell) P_ell summed per pair up to a truncation degree.
// The diagonal part of the tail (P_ell(1) = 1) is added in full from a
// semi-analytic series tail; the off-diagonal remainder is bounded per pair
// and reported as tail_bound. max_degree = 0 picks a cost-based truncation.
WceResult wce_sobolev(const PointSet& points, double s, double tol = 1e-6,
                      int threads = 0, unsigned max_degree = 0);
// Same with weights (1+lambda)^{-d/2} (ln(2+lambda))^{-2 gamma}.
WceResult wce_logspace(const PointSet& points, double gamma, double tol = 1e-6,
                       int threads = 0, unsigned max_degree = 0);

// Tail sum_{ell >= from} w(ell) Z(d,ell) of the two weight families, used for
// the diagonal tail and for oracle checks.
double sobolev_series_tail(int d, double s, unsigned from);
double logspace_series_tail(int d, double gamma, unsigned from);

} // namespace sphd
