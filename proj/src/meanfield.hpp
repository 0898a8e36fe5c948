#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "objectives.hpp"
#include "swarm.hpp"

namespace swarmkit::pde {

// Uniform cell-centered axis.
struct Axis {
    double lower = -3.0;
    double upper = 3.0;
    std::size_t cells = 90;

    double width() const { return (upper - lower) / static_cast<double>(cells); }
    double center(std::size_t i) const { return lower + (static_cast<double>(i) + 0.5) * width(); }
    double face(std::size_t i) const { return lower + static_cast<double>(i) * width(); }

    friend bool operator==(const Axis&, const Axis&) = default;
};

enum class Splitting { Lie, Strang };

// Face flux of the v-direction Fokker-Planck solve. Auto uses Central and
// re-solves a column with Fitted only if the central result dips below
// -1e-9 times the field maximum.
enum class VFlux { Central, Fitted, Auto };

// MfPso: f(x,v); MfPsoMemory: f(x,y,v); MfCbo: rho(x); MfCboLocalBest: rho(x,y).
enum class Kind { MfPso, MfPsoMemory, MfCbo, MfCboLocalBest };

std::string_view kind_name(Kind kind);
Kind parse_kind(std::string_view name);
std::string_view splitting_name(Splitting s);
Splitting parse_splitting(std::string_view name);
std::string_view vflux_name(VFlux f);
VFlux parse_vflux(std::string_view name);

struct PhaseGrid {
    Axis x{-3.0, 3.0, 90};
    Axis y{-3.0, 3.0, 90};
    Axis v{-4.0, 4.0, 120};
    double dt = 1.0e-3;
    Splitting splitting = Splitting::Lie;
    // Implicit weight of the v-direction Fokker-Planck and x-diffusion solves:
    // 1 is backward Euler, 0.5 is Crank-Nicolson.
    double implicit_theta = 1.0;
    VFlux v_flux = VFlux::Auto;

    friend bool operator==(const PhaseGrid&, const PhaseGrid&) = default;
};

void validate(const PhaseGrid& grid, Kind kind);

struct LabeledAxis {
    char label = 'x';
    Axis axis;

    friend bool operator==(const LabeledAxis&, const LabeledAxis&) = default;
};

// Cell values on a tensor grid, row-major with the last axis fastest.
struct DensityField {
    std::vector<LabeledAxis> axes;
    std::vector<double> values;
    double time = 0.0;

    DensityField() = default;
    explicit DensityField(std::vector<LabeledAxis> a, double t = 0.0);

    std::size_t rank() const { return axes.size(); }
    std::size_t extent(std::size_t i) const { return axes[i].axis.cells; }
    std::optional<std::size_t> find(char label) const;
    const Axis& axis(char label) const;
    std::string labels() const;
    double cell_volume() const;
    double mass() const;
    double max_value() const;
    double min_value() const;
};

DensityField make_field(Kind kind, const PhaseGrid& grid);

// Initial data from a particle law. Positions use law.position on the x axis
// (UniformBox means the whole axis); velocities need a Gaussian or Uniform
// law. Memory kinds place the mass on the diagonal y = x. Normalized to mass 1.
DensityField initial_density(Kind kind, const PhaseGrid& grid, const InitialLaw& law);

// Integrates out every axis not listed in `keep` (labels in field order).
DensityField marginal(const DensityField& field, std::string_view keep);

// Laplace-weighted mean of the marginal along `label`, stabilized by the
// minimum cost over cells with positive mass. Negative undershoots are
// ignored. Throws std::domain_error on zero marginal mass.
double consensus_from_density(const DensityField& field, char label,
                              std::span<const double> costs_on_axis, double alpha);
double consensus_from_density(const DensityField& field, char label,
                              const ObjectiveSpec& objective, double alpha);

// x-transport v df/dx by a conservative (flux-form) backward semi-Lagrangian
// step: the mass through each face is the integral, over the region its
// characteristics sweep, of a parabola fitted to three cell averages. No CFL
// limit. f = 0 outside the box, and nothing flows in from there.
void transport_x_step(DensityField& field, double dt);

// One implicit step of df/dt = d/dv [A(v) f + D df/dv] in a single column,
// A(v) = friction * v + drift, with zero flux through the v boundaries.
// Central: F = A (f_j + f_{j+1}) / 2 + D (f_{j+1} - f_j) / dv. Fitted: the
// Scharfetter-Gummel flux, equal to the central one up to O(dv^2) where D
// resolves the cell and upwind where it does not (D = 0 at x = xbar).
// Auto is treated as Central here.
void fokker_planck_column(std::span<double> column, const Axis& v, double friction, double drift,
                          double diffusion, double dt, double implicit_theta,
                          VFlux flux = VFlux::Central);

// The v-direction Fokker-Planck sub-step for f(x,v) or f(x,y,v). The
// consensus point is frozen for the step.
void fokker_planck_v_step(DensityField& field, double consensus, const SolverParams& params,
                          double dt, double implicit_theta = 1.0, VFlux flux = VFlux::Auto);

// Memory advection d/dy [nu (x - y) S^beta(x, y) f] by Lax-Wendroff with a
// van Leer limiter (second order where smooth, no new extrema), zero inflow.
// Throws std::domain_error when the CFL number exceeds 1.
void memory_advection_y_step(DensityField& field, const SolverParams& params,
                             const ObjectiveSpec& objective, double dt);

// Mean-field CBO pieces on rho(x) or rho(x,y).
void cbo_drift_x_step(DensityField& field, double consensus, const SolverParams& params, double dt);
void cbo_diffusion_x_step(DensityField& field, double consensus, const SolverParams& params,
                          double dt, double implicit_theta = 1.0);

// Full split steps using grid.dt. The consensus point is recomputed once per
// step from the current field and returned. Lie freezes that value for the
// step; Strang extrapolates it to the half step from `previous_consensus`
// (the value returned by the step before) when given.
double mf_pso_step(DensityField& field, const SolverParams& params, const PhaseGrid& grid,
                   const ObjectiveSpec& objective,
                   std::optional<double> previous_consensus = std::nullopt);
double mf_cbo_step(DensityField& field, const SolverParams& params, const PhaseGrid& grid,
                   const ObjectiveSpec& objective,
                   std::optional<double> previous_consensus = std::nullopt);

// Discrete local Maxwellian of the small-inertia scaling: Gaussian in v with
// variance sigma^2 (x - xbar)^2 / (2 eps), normalized so sum * dv = 1. A
// degenerate width returns all the mass in the cell nearest v = 0.
std::vector<double> maxwellian_profile(double x, double consensus, double sigma, double eps,
                                       const Axis& v);

// Owns a field and advances it with the kind's split step.
class MeanFieldSolver {
public:
    MeanFieldSolver(Kind kind, SolverParams params, PhaseGrid grid, ObjectiveSpec objective,
                    DensityField initial);

    void step();
    // Steps until time >= t (to within half a step).
    void advance_to(double t);

    const DensityField& field() const { return field_; }
    DensityField& field() { return field_; }
    Kind kind() const { return kind_; }
    const PhaseGrid& grid() const { return grid_; }
    double last_consensus() const { return last_consensus_; }
    // Most negative min/max ratio seen so far (0 if never negative).
    double worst_undershoot() const { return worst_undershoot_; }
    std::size_t steps() const { return steps_; }

private:
    Kind kind_;
    SolverParams params_;
    PhaseGrid grid_;
    ObjectiveSpec objective_;
    DensityField field_;
    std::optional<double> previous_;
    double last_consensus_ = 0.0;
    double worst_undershoot_ = 0.0;
    std::size_t steps_ = 0;
};

// Histogram of one coordinate of a particle ensemble on the cells of `axis`,
// normalized by the total particle count (particles outside are dropped).
DensityField particle_histogram(std::span<const double> coords, std::size_t stride,
                                std::size_t component, const Axis& axis, char label = 'x');

// L1 distance sum |a - b| * dx between two fields on the same grid.
double l1_distance(const DensityField& a, const DensityField& b);

}  // namespace swarmkit::pde
