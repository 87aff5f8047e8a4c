#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nonlocal {

// Tail classes of the jump density.
struct UltraLight {
  double alpha;  // a(y) <= C exp(-|y|^alpha), alpha > 1
};
struct Light {
  double delta;  // a(y) <= C exp(-delta |y|)
};
struct Moderate {
  double gamma;  // a(y) ~ |y|^{-d-gamma}, gamma > 2
};
struct Heavy {
  double gamma;  // a(y) ~ |y|^{-d-gamma}, 0 < gamma < 2
};
using TailClass = std::variant<UltraLight, Light, Moderate, Heavy>;

std::string describe(const TailClass& tail);
void validate_tail(const TailClass& tail);
bool is_ultra_light(const TailClass& tail);

// Everything a kernel constructor knows.  Evaluators take the radial
// argument |y| (resp. |k|); the library's grid operations are one-dimensional.
struct KernelSpec {
  std::string name;
  int dimension = 1;
  double intensity = 1.0;
  TailClass tail = UltraLight{2.0};
  double mass_tolerance = 1e-10;
  double scale = 1.0;  // characteristic jump length

  std::function<double(double)> density;
  std::function<double(double)> log_density;       // optional
  std::function<double(double)> symbol;            // optional closed form
  std::function<double(double)> one_minus_symbol;  // optional, cancellation-free
  std::function<double(double)> tail_mass;         // optional, mass of |y| > X
  std::function<double(double)> symbol_cutoff;     // optional, tol -> K

  std::optional<double> support_halfwidth;
  std::optional<double> symbol_zero_beyond;
  std::vector<double> symbol_breakpoints;  // kinks of the symbol on k > 0
  // Set when the symbol is exp(-|k|^gamma), so a_n(x) = n^{-1/gamma} a(x n^{-1/gamma}).
  std::optional<double> stable_index;
};

class JumpKernel {
 public:
  explicit JumpKernel(KernelSpec spec);

  const std::string& name() const { return spec_->name; }
  int dimension() const { return spec_->dimension; }
  double intensity() const { return spec_->intensity; }
  const TailClass& tail() const { return spec_->tail; }
  double mass_tolerance() const { return spec_->mass_tolerance; }
  double scale() const { return spec_->scale; }

  JumpKernel with_intensity(double chi) const;

  double density(double y) const;
  double log_density(double y) const;

  bool has_closed_symbol() const { return static_cast<bool>(spec_->symbol); }
  // Closed form when known, cosine quadrature of the density otherwise.
  double symbol(double k) const;
  double numeric_symbol(double k) const;
  double one_minus_symbol(double k) const;

  std::optional<double> support_halfwidth() const { return spec_->support_halfwidth; }
  std::optional<double> symbol_zero_beyond() const { return spec_->symbol_zero_beyond; }
  const std::vector<double>& symbol_breakpoints() const { return spec_->symbol_breakpoints; }
  std::optional<double> stable_index() const { return spec_->stable_index; }

  // |k| beyond which |a^(k)| < tol.
  double symbol_cutoff(double tol) const;

  bool has_tail_mass() const;
  double tail_mass(double x) const;
  // Smallest X (to a few percent) whose tail mass is below tol.
  double density_cutoff(double tol) const;

  bool requires_one_dimension() const { return spec_->dimension == 1; }

 private:
  // Upper limit of the cosine quadratures for a given panel width.
  double quadrature_reach(double panel_width) const;

  std::shared_ptr<const KernelSpec> spec_;
};

JumpKernel make_gaussian(double sigma, int d = 1);
JumpKernel make_stable_like(double gamma, int d = 1);
JumpKernel make_embedded_family(double h);
JumpKernel make_embedded_family_multi(const std::vector<double>& h_seq, int m_max);
// a(y) proportional to exp(-|y|^alpha), alpha > 1.
JumpKernel make_exponential_power(double alpha);
JumpKernel make_custom(KernelSpec spec);

// Quadratic factor of the single-h embedded density,
// pi x^2 a(x) = 2 s q(s) with s = sin^2(x/2).
double embedded_quadratic(double h, double s);

// Sine integral Si(z).
double sine_integral(double z);

enum class PotentialProfile { kZero, kBump, kRaisedCosine, kGaussianBump };

std::string to_string(PotentialProfile profile);
PotentialProfile potential_profile_from_string(const std::string& name);

// v_R(x) = amplitude * shape(|x| / (R * support_radius)), shape(0) = 1 and
// shape vanishing for arguments >= 1.
struct Potential {
  PotentialProfile profile = PotentialProfile::kBump;
  double amplitude = 0.0;
  double support_radius = 1.0;
  double delta = 0.5;
  double R = 1.0;

  static Potential make(PotentialProfile profile, double amplitude, double support_radius,
                        double delta, double R = 1.0);

  double operator()(double x) const;
  double shape(double r) const;
  double scaled_radius() const { return R * support_radius; }
  double sup_bound() const { return 1.0 - delta; }
  double sup() const { return profile == PotentialProfile::kZero ? 0.0 : amplitude; }
  bool is_zero() const { return profile == PotentialProfile::kZero || amplitude == 0.0; }

  Potential with_scale(double new_R) const;
  Potential scaled(double factor) const;
};

// Checks 0 <= v <= (1 - delta) * chi, the constraint in internal units.
void check_admissible(const Potential& v, double chi);

struct SymbolGrid {
  std::vector<double> k;
  std::vector<double> values;
  double K = 0.0;
  double spacing = 0.0;
  bool from_closed_form = true;
  double boundary_value = 0.0;
  std::optional<double> certified_zero_beyond;
};

enum class SymbolRoute { kAuto, kClosedForm, kQuadrature };

// Default half-width: a^(K) below 1e-10 for ultra-light tails, 1e-6 otherwise.
double default_symbol_halfwidth(const JumpKernel& kernel);
double symbol_boundary_threshold(const JumpKernel& kernel);

SymbolGrid kernel_symbol(const JumpKernel& kernel, double K, std::size_t n_points,
                         SymbolRoute route = SymbolRoute::kAuto);

struct ValidationGridSpec {
  double halfwidth = 20.0;
  std::size_t n_points = 1 << 14;
  bool adaptive = false;  // Gauss panels on log-spaced intervals plus tail correction
};

struct ValidationReport {
  double symmetry_defect = 0.0;
  double min_density = 0.0;
  double mass_defect = 0.0;
  bool passed = false;
  std::vector<std::string> notes;
};

ValidationReport validate_kernel(const JumpKernel& kernel, const ValidationGridSpec& grid,
                                 double tol);

}  // namespace nonlocal
