#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nonlocal/greens.hpp"
#include "nonlocal/kernels.hpp"

namespace nonlocal {

// Nystrom discretization of sqrt(w) T_lambda sqrt(w) on supp v_R, with
// w = (1+lambda) v_R / (1+lambda - v_R).  Nodes form a uniform lattice on
// [-R rho, R rho], so T is needed only at lattice differences.
// matrix(i, j) = sqrt(wt_i w_i) T(x_i - x_j) sqrt(w_j wt_j).
struct GroundEnergyOperator {
  double lambda = 0.0;
  double R = 1.0;
  double spacing = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<double> w_values;
  Eigen::MatrixXd matrix;
};

// The potential is in internal units (chi = 1).  lambda = 0 needs a
// transient kernel.
GroundEnergyOperator build_bs_operator(const JumpKernel& kernel, const Potential& v, double lambda,
                                       double R, std::size_t n_nodes);

struct PerronOptions {
  double tol = 1e-12;        // relative change of the Rayleigh quotient
  int max_iterations = 10000;
};

struct PerronResult {
  double mu0 = 0.0;
  Eigen::VectorXd vector;  // unit 2-norm, entrywise non-negative
  int iterations = 0;
};

// Power iteration from the constant vector (or from `start`).
PerronResult perron_eigenvalue(const Eigen::MatrixXd& matrix, const PerronOptions& options = {},
                               const Eigen::VectorXd* start = nullptr);
inline PerronResult perron_eigenvalue(const GroundEnergyOperator& op, const PerronOptions& options = {}) {
  return perron_eigenvalue(op.matrix, options);
}

enum class EigenStatus { kFound, kNone, kInconclusive };
std::string to_string(EigenStatus status);

struct EigenOptions {
  std::size_t initial_nodes = 128;
  std::size_t max_nodes = 4096;
  double refinement_tol = 1e-5;  // mu0 shift under node doubling
  double lambda_floor = 0x1p-20;
  double root_tol = 1e-10;       // on lambda (internal units)
  bool ground_state = true;
  double ground_state_halfwidth = 0.0;  // 0: 2 R rho + 8 jump scales
  PerronOptions perron;
};

struct PrincipalEigenvalue {
  EigenStatus status = EigenStatus::kNone;
  double chi = 1.0;
  double lambda0 = 0.0;  // physical units (chi lambda_internal)
  double R = 1.0;
  std::vector<std::pair<double, double>> mu_curve;  // (lambda internal, mu0)
  std::optional<double> mu_at_zero;                 // transient kernels only
  std::size_t n_nodes = 0;
  std::vector<double> nodes;
  std::vector<double> psi1;  // un-symmetrized Birman-Schwinger eigenvector
  std::vector<double> x;     // ground-state lattice
  std::vector<double> phi0;  // sup-normalized ground state
  double phi0_l2 = 0.0;      // ||phi0|| before L2 normalization
  double fixed_point_residual = 0.0;
  std::string note;
};

// Largest positive eigenvalue of H = L + v(./R).  The kernel's intensity is
// chi; v is in physical units with sup v <= (1 - delta) chi.
PrincipalEigenvalue principal_eigenvalue(const JumpKernel& kernel, const Potential& v, double R,
                                         const EigenOptions& options = {});

// mu0(lambda, R) in internal units with node refinement.
double mu0(const JumpKernel& kernel, const Potential& v_internal, double lambda, double R,
           std::size_t& n_nodes, const EigenOptions& options = {});

struct ThresholdPoint {
  double R = 0.0;
  EigenStatus status = EigenStatus::kNone;
  double lambda0 = 0.0;
  std::string error;
};

std::vector<ThresholdPoint> threshold_scan(const JumpKernel& kernel, const Potential& v,
                                           const std::vector<double>& R_grid,
                                           const EigenOptions& options = {}, std::size_t jobs = 0);

// Experimental: every eigenvalue of sqrt(w) T_lambda sqrt(w) above one at
// small lambda.  No root-finding and no certification for j >= 1.
std::vector<double> bs_eigenvalues_above_one(const JumpKernel& kernel, const Potential& v, double R,
                                             double lambda, std::size_t n_nodes);

}  // namespace nonlocal
