#pragma once

#include "sphd/geometry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sphd {

// Positive-definite kernel on [-1,1], either as Legendre coefficients a_n,
// the Riesz power kernel |x-y|^{-s} = (2-2t)^{-s/2}, or a custom radial map.
struct KernelSpec {
    enum class Kind { Coefficients, Riesz, Radial };

    Kind kind = Kind::Coefficients;
    int d = 2;
    std::vector<double> coeffs;               // Coefficients: a_n >= 0
    double s = 0.0;                           // Riesz: 0 < s < d
    std::function<double(double)> radial;     // Radial: t -> K(t)
    bool radial_singular = false;             // Radial: pole at t = 1

    static KernelSpec coefficients(int d, std::vector<double> a);
    static KernelSpec riesz(int d, double s);
    static KernelSpec custom_radial(int d, std::function<double(double)> f,
                                    bool singular_at_one);

    bool singular() const;
    double eval(double t) const;       // kernel value at inner product t
    double constant_term() const;      // a_0; the mean-field level of the kernel
};

enum class EnergyNormalization { PairwiseHalf, MeanSquared, OffdiagMean };

struct EnergyReport {
    double value = 0.0;
    EnergyNormalization normalization = EnergyNormalization::PairwiseHalf;
    double leading_term = 0.0;
    double remainder = 0.0;        // value - leading_term, exact
    double remainder_scaled = 0.0; // remainder / N^expo for the Riesz kernel, else 0
    std::string to_json() const;
};

// Half-sum of |x_i-x_j|^{-s} over unordered pairs; leading term V_d(s)N^2/2.
EnergyReport riesz_energy(const PointSet& points, double s, int threads = 0);

// Energy integral of the Riesz kernel over the normalized sphere, computed by
// double-exponential quadrature of the 1-D radial reduction (ground truth).
double v_d(int d, double s);
// Independent check: adaptive Simpson after a power substitution that removes
// the endpoint singularity.
double v_d_second(int d, double s);
// Beta-function closed form; agrees with the quadrature to full precision.
double v_d_closed_form(int d, double s);
// Alternative gamma-ratio expression sometimes quoted for this integral.
// It matches at s = d-1 but deviates elsewhere; kept so reports can show
// the deviation from the quadrature value.
double v_d_gamma_ratio_form(int d, double s);

// Mean of K over all ordered pairs, diagonal included. Rejects singular kernels.
EnergyReport kernel_energy(const PointSet& points, const KernelSpec& kernel,
                           int threads = 0);
// Same with the diagonal omitted (required for singular kernels).
EnergyReport kernel_energy_offdiag(const PointSet& points, const KernelSpec& kernel,
                                   int threads = 0);

// Degree-t partial sum h_t and tail r_t of the Jacobi expansion of
// 2^{-s/2}(1-x)^{-s/2}, so that h_t(x) + r_t(x) reconstructs that function.
// r_t needs |x| < 1 for convergence of the tail sum.
double h_t_eval(int d, double s, int bigk, unsigned t, double x);
double r_t_eval(int d, double s, int bigk, unsigned t, double x, double tol = 1e-10);

} // namespace sphd
