#include "nonlocal/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "nonlocal/error.hpp"
#include "nonlocal/parallel.hpp"

namespace nonlocal {

namespace {

struct Lattice {
  double rho = 0.0;
  double h = 0.0;
  std::vector<double> nodes;
  std::vector<double> weights;
};

Lattice support_lattice(const Potential& vR, std::size_t n) {
  Lattice out;
  out.rho = vR.scaled_radius();
  out.h = 2.0 * out.rho / static_cast<double>(n - 1);
  out.nodes.resize(n);
  out.weights.assign(n, out.h);
  out.weights.front() = out.weights.back() = 0.5 * out.h;
  for (std::size_t i = 0; i < n; ++i) out.nodes[i] = -out.rho + static_cast<double>(i) * out.h;
  return out;
}

double mu_fixed(const JumpKernel& kernel, const Potential& v, double lambda, double R, std::size_t n,
                const PerronOptions& options, Eigen::VectorXd* warm) {
  const auto op = build_bs_operator(kernel, v, lambda, R, n);
  const Eigen::VectorXd* start = (warm && warm->size() == static_cast<long>(n)) ? warm : nullptr;
  auto res = perron_eigenvalue(op.matrix, options, start);
  if (warm) *warm = res.vector;
  return res.mu0;
}

}  // namespace

std::string to_string(EigenStatus status) {
  switch (status) {
    case EigenStatus::kFound: return "found";
    case EigenStatus::kNone: return "none";
    case EigenStatus::kInconclusive: return "inconclusive";
  }
  return "unknown";
}

GroundEnergyOperator build_bs_operator(const JumpKernel& kernel, const Potential& v, double lambda,
                                       double R, std::size_t n_nodes) {
  require(n_nodes >= 8, ErrorKind::kResolution, "at least 8 Nystrom nodes are required");
  require(lambda >= 0.0, ErrorKind::kInvalidParameter, "lambda must be non-negative");
  require(R > 0.0, ErrorKind::kInvalidParameter, "R must be positive");
  require(v.sup() < 1.0, ErrorKind::kInvalidParameter, "sup v must be below 1 in internal units");
  const Potential vR = v.with_scale(R);
  const Lattice lat = support_lattice(vR, n_nodes);

  GroundEnergyOperator op;
  op.lambda = lambda;
  op.R = R;
  op.spacing = lat.h;
  op.nodes = lat.nodes;
  op.weights = lat.weights;
  op.w_values.resize(n_nodes);
  const double s = 1.0 + lambda;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double vi = vR(lat.nodes[i]);
    op.w_values[i] = s * vi / (s - vi);
  }
  op.matrix = Eigen::MatrixXd::Zero(static_cast<long>(n_nodes), static_cast<long>(n_nodes));
  if (vR.is_zero()) return op;

  if (lambda == 0.0) {
    const auto verdict = transience_test(kernel);
    if (verdict.verdict != Transience::kTransient)
      fail(ErrorKind::kRecurrentResolvent, "lambda = 0 needs a transient kernel (" + verdict.note + ")");
  }
  const ResolventTable table(kernel, lambda, lat.h, n_nodes);
  Eigen::VectorXd a(static_cast<long>(n_nodes));
  for (std::size_t i = 0; i < n_nodes; ++i) a[static_cast<long>(i)] = std::sqrt(op.weights[i] * op.w_values[i]);
  for (long i = 0; i < static_cast<long>(n_nodes); ++i)
    for (long j = 0; j <= i; ++j) {
      const double m = a[i] * table.at(i - j) * a[j];
      op.matrix(i, j) = m;
      op.matrix(j, i) = m;
    }
  return op;
}

PerronResult perron_eigenvalue(const Eigen::MatrixXd& matrix, const PerronOptions& options,
                               const Eigen::VectorXd* start) {
  require(matrix.rows() == matrix.cols() && matrix.rows() > 0, ErrorKind::kInvalidParameter,
          "square matrix required");
  require(matrix.minCoeff() >= 0.0, ErrorKind::kInvalidParameter, "matrix has negative entries");
  const long n = matrix.rows();
  PerronResult out;
  Eigen::VectorXd x = start ? *start : Eigen::VectorXd::Ones(n);
  x /= x.norm();
  double mu = 0.0;
  for (int it = 1; it <= options.max_iterations; ++it) {
    const Eigen::VectorXd y = matrix * x;
    const double next = x.dot(y);
    const double norm = y.norm();
    if (norm == 0.0) {
      out.mu0 = 0.0;
      out.vector = x;
      out.iterations = it;
      return out;
    }
    x = y / norm;
    if (it > 1 && std::abs(next - mu) <= options.tol * std::abs(next)) {
      out.mu0 = next;
      out.vector = x;
      out.iterations = it;
      return out;
    }
    mu = next;
  }
  std::ostringstream os;
  os.precision(15);
  os << "power iteration did not converge in " << options.max_iterations
     << " iterations (last Rayleigh quotient " << mu << ")";
  fail(ErrorKind::kIterationLimit, os.str());
}

double mu0(const JumpKernel& kernel, const Potential& v_internal, double lambda, double R,
           std::size_t& n_nodes, const EigenOptions& options) {
  double coarse = mu_fixed(kernel, v_internal, lambda, R, n_nodes, options.perron, nullptr);
  while (true) {
    require(2 * n_nodes <= options.max_nodes, ErrorKind::kResolution,
            "mu0 not converged at " + std::to_string(n_nodes) + " nodes");
    const double fine = mu_fixed(kernel, v_internal, lambda, R, 2 * n_nodes, options.perron, nullptr);
    n_nodes *= 2;
    if (std::abs(fine - coarse) <= options.refinement_tol * std::max(1.0, fine)) return fine;
    coarse = fine;
  }
}

PrincipalEigenvalue principal_eigenvalue(const JumpKernel& kernel, const Potential& v, double R,
                                         const EigenOptions& options) {
  const double chi = kernel.intensity();
  check_admissible(v, chi);
  const Potential vi = v.scaled(1.0 / chi);

  PrincipalEigenvalue out;
  out.chi = chi;
  out.R = R;
  if (vi.is_zero()) {
    out.status = EigenStatus::kNone;
    out.note = "v = 0";
    return out;
  }

  std::size_t n = options.initial_nodes;
  Eigen::VectorXd warm;
  double lo = 0.0, hi = 0.0;
  while (true) {
    out.mu_curve.clear();
    warm.resize(0);
    bool bracketed = false;
    double prev = 0.0;
    for (double lambda = 1.0; lambda >= options.lambda_floor; lambda *= 0.5) {
      const double mu = mu_fixed(kernel, vi, lambda, R, n, options.perron, &warm);
      out.mu_curve.emplace_back(lambda, mu);
      if (mu > 1.0) {
        require(lambda < 1.0, ErrorKind::kSolverFailure, "mu0(1) > 1 contradicts lambda0 <= 1 - delta");
        lo = lambda;
        hi = prev;
        bracketed = true;
        break;
      }
      prev = lambda;
    }
    if (!bracketed) {
      const auto verdict = transience_test(kernel);
      if (verdict.verdict == Transience::kTransient) {
        const double mu = mu_fixed(kernel, vi, 0.0, R, n, options.perron, nullptr);
        out.mu_at_zero = mu;
        if (mu > 1.0) {
          lo = 0.0;
          hi = prev;
          bracketed = true;
        } else {
          out.status = EigenStatus::kNone;
          out.n_nodes = n;
          out.note = "mu0(0) = " + std::to_string(mu) + " <= 1";
          return out;
        }
      } else {
        out.status = EigenStatus::kInconclusive;
        out.n_nodes = n;
        out.note = "mu0 <= 1 at the probe floor lambda = " + std::to_string(options.lambda_floor) +
                   " for a non-transient kernel";
        return out;
      }
    }

    auto f = [&](double lambda) { return mu_fixed(kernel, vi, lambda, R, n, options.perron, &warm) - 1.0; };
    std::uintmax_t iters = 200;
    const auto root = boost::math::tools::toms748_solve(
        f, lo, hi, [&](double a, double b) { return std::abs(b - a) <= options.root_tol; }, iters);
    const double lambda0 = 0.5 * (root.first + root.second);

    const double check_n = mu_fixed(kernel, vi, lambda0, R, n, options.perron, nullptr);
    const double check_2n = mu_fixed(kernel, vi, lambda0, R, 2 * n, options.perron, nullptr);
    if (std::abs(check_2n - check_n) > options.refinement_tol) {
      n *= 2;
      require(2 * n <= options.max_nodes, ErrorKind::kResolution,
              "principal eigenvalue not converged at " + std::to_string(n) + " nodes");
      continue;
    }
    out.lambda0 = chi * lambda0;
    break;
  }
  out.n_nodes = n;
  out.status = EigenStatus::kFound;
  if (!options.ground_state) return out;

  // Ground state phi = (1+l)/(1+l-v) T (sqrt(w) psi) on an extended lattice.
  const double lambda = out.lambda0 / chi;
  const auto op = build_bs_operator(kernel, vi, lambda, R, n);
  const auto perron = perron_eigenvalue(op.matrix, options.perron);
  const Potential vR = vi.with_scale(R);
  const double rho = vR.scaled_radius();
  const double h = op.spacing;
  const double X = options.ground_state_halfwidth > 0.0 ? options.ground_state_halfwidth
                                                        : 2.0 * rho + 8.0 * kernel.scale();
  const long extra = static_cast<long>(std::ceil(std::max(0.0, X - rho) / h));
  const long total = static_cast<long>(n) + 2 * extra;
  const ResolventTable table(kernel, lambda, h, static_cast<std::size_t>(total));

  out.nodes = op.nodes;
  out.psi1.resize(n);
  std::vector<double> source(n);  // sqrt(w) psi wt = v phi wt
  for (std::size_t j = 0; j < n; ++j) {
    out.psi1[j] = op.weights[j] > 0.0 ? perron.vector[static_cast<long>(j)] / std::sqrt(op.weights[j]) : 0.0;
    source[j] = std::sqrt(op.w_values[j]) * out.psi1[j] * op.weights[j];
  }
  const double s = 1.0 + lambda;
  out.x.resize(static_cast<std::size_t>(total));
  out.phi0.resize(static_cast<std::size_t>(total));
  for (long i = 0; i < total; ++i) {
    const long node_index = i - extra;
    const double x = -rho + static_cast<double>(node_index) * h;
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += table.at(node_index - static_cast<long>(j)) * source[j];
    out.x[static_cast<std::size_t>(i)] = x;
    out.phi0[static_cast<std::size_t>(i)] = s / (s - vR(x)) * acc;
  }
  const double sup = *std::max_element(out.phi0.begin(), out.phi0.end());
  require(sup > 0.0, ErrorKind::kNumericalPositivity, "ground state vanishes");
  for (double& p : out.phi0) p /= sup;
  const double min_phi = *std::min_element(out.phi0.begin(), out.phi0.end());
  require(min_phi > 0.0, ErrorKind::kNumericalPositivity, "ground state is not positive");
  double l2 = 0.0;
  for (double p : out.phi0) l2 += p * p;
  out.phi0_l2 = std::sqrt(l2 * h);

  // phi - G_lambda(v phi), with v phi supported on the nodes.
  double residual = 0.0;
  for (long i = 0; i < total; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const long idx = extra + static_cast<long>(j);
      acc += table.at(i - idx) * vR(out.x[static_cast<std::size_t>(idx)]) *
             out.phi0[static_cast<std::size_t>(idx)] * op.weights[j];
    }
    const double xi = out.x[static_cast<std::size_t>(i)];
    const double g = vR(xi) * out.phi0[static_cast<std::size_t>(i)] / s + acc;
    residual = std::max(residual, std::abs(out.phi0[static_cast<std::size_t>(i)] - g));
  }
  out.fixed_point_residual = residual;
  return out;
}

std::vector<ThresholdPoint> threshold_scan(const JumpKernel& kernel, const Potential& v,
                                           const std::vector<double>& R_grid, const EigenOptions& options,
                                           std::size_t jobs) {
  for (std::size_t i = 1; i < R_grid.size(); ++i)
    require(R_grid[i] > R_grid[i - 1], ErrorKind::kInvalidParameter, "R grid must be increasing");
  std::vector<ThresholdPoint> out(R_grid.size());
  parallel_for(
      R_grid.size(),
      [&](std::size_t i) {
        out[i].R = R_grid[i];
        try {
          EigenOptions local = options;
          local.ground_state = false;
          const auto pe = principal_eigenvalue(kernel, v, R_grid[i], local);
          out[i].status = pe.status;
          out[i].lambda0 = pe.lambda0;
        } catch (const Error& e) {
          out[i].status = EigenStatus::kInconclusive;
          out[i].error = e.what();
        }
      },
      jobs);
  return out;
}

std::vector<double> bs_eigenvalues_above_one(const JumpKernel& kernel, const Potential& v, double R,
                                             double lambda, std::size_t n_nodes) {
  const double chi = kernel.intensity();
  check_admissible(v, chi);
  const auto op = build_bs_operator(kernel, v.scaled(1.0 / chi), lambda, R, n_nodes);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.matrix, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (long i = solver.eigenvalues().size() - 1; i >= 0; --i)
    if (solver.eigenvalues()[i] > 1.0) out.push_back(solver.eigenvalues()[i]);
  return out;
}

}  // namespace nonlocal
