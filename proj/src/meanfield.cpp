#include "meanfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "consensus.hpp"
#include "tridiagonal.hpp"

namespace swarmkit::pde {

namespace {

std::string lower_copy(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool has_v(Kind kind) { return kind == Kind::MfPso || kind == Kind::MfPsoMemory; }
bool has_y(Kind kind) { return kind == Kind::MfPsoMemory || kind == Kind::MfCboLocalBest; }

// Index layout of one axis inside a row-major field.
struct Stride {
    std::size_t outer = 1;  // product of extents before the axis
    std::size_t n = 1;      // extent of the axis
    std::size_t inner = 1;  // product of extents after the axis
};

Stride stride_of(const DensityField& field, std::size_t axis) {
    Stride s;
    for (std::size_t i = 0; i < axis; ++i) s.outer *= field.extent(i);
    s.n = field.extent(axis);
    for (std::size_t i = axis + 1; i < field.rank(); ++i) s.inner *= field.extent(i);
    return s;
}

std::size_t require_axis(const DensityField& field, char label) {
    const auto idx = field.find(label);
    if (!idx) throw std::invalid_argument(std::string("density field has no '") + label + "' axis");
    return *idx;
}

std::vector<double> axis_costs(const Axis& axis, const ObjectiveSpec& objective, bool faces) {
    if (objective.dim != 1) throw std::invalid_argument("objective.dim: mean-field solvers need dim = 1");
    const std::size_t n = faces ? axis.cells + 1 : axis.cells;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = faces ? axis.face(i) : axis.center(i);
        out[i] = evaluate(objective, std::span<const double>(&p, 1));
    }
    return out;
}

// Flux-limited Lax-Wendroff update of df/dt + d/ds (c f) = 0 along one
// strided line. Face flux is c_face times the upwind value plus the
// Lax-Wendroff correction scaled by a van Leer limiter. Upwinding on face
// speeds keeps it positive where c changes sign inside a cell. c_face holds
// the n+1 face speeds; values outside the line are zero.
void lax_wendroff_line(double* f, std::size_t n, std::size_t stride, const double* c_face,
                       double dt, double ds, std::vector<double>& flux) {
    flux.assign(n + 1, 0.0);
    const double mu = dt / ds;
    auto at = [&](std::ptrdiff_t k) {
        return (k >= 0 && k < static_cast<std::ptrdiff_t>(n)) ? f[k * stride] : 0.0;
    };
    auto van_leer = [](double up, double jump) {
        if (up * jump <= 0.0) return 0.0;
        const double r = up / jump;
        return 2.0 * r / (1.0 + r);
    };
    for (std::size_t k = 1; k < n; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const double fl = at(i - 1), fr = at(i);
        const double jump = fr - fl;
        const double c = c_face[k];
        if (c >= 0.0)
            flux[k] = c * (fl + 0.5 * (1.0 - mu * c) * van_leer(fl - at(i - 2), jump) * jump);
        else
            flux[k] = c * (fr - 0.5 * (1.0 + mu * c) * van_leer(at(i + 1) - fr, jump) * jump);
    }
    // Edge faces: donor cell for outflow, nothing enters from outside.
    flux[0] = std::min(c_face[0], 0.0) * f[0];
    flux[n] = std::max(c_face[n], 0.0) * f[(n - 1) * stride];
    for (std::size_t k = 0; k < n; ++k) f[k * stride] -= mu * (flux[k + 1] - flux[k]);
}

void check_cfl(double speed, double dt, double ds, const char* what) {
    if (std::abs(speed) * dt / ds > 1.0 + 1e-12)
        throw std::domain_error(std::string(what) + ": CFL number exceeds 1, reduce grid.dt");
}

// Cell average of a Gaussian density over [a, b].
double gaussian_mass(double a, double b, double mean, double std) {
    const double s = std::sqrt(2.0) * std;
    return 0.5 * (std::erf((b - mean) / s) - std::erf((a - mean) / s));
}

double uniform_overlap(double a, double b, double lo, double hi) {
    return std::max(0.0, std::min(b, hi) - std::max(a, lo));
}

// Per-row coefficients of the flux-form semi-Lagrangian step for a row that
// moves `shift` cells per step. The mass through a face is `whole` full
// upwind cells plus an r-wide strip of the next one, integrated against the
// parabola f_j + a1 xi + a2 (xi^2 - 1/12) fitted to three cell averages.
struct SlRow {
    double shift = 0.0;
    long whole = 0;
    double r = 0.0;
    double m1 = 0.0;  // strip moments of xi and xi^2 - 1/12
    double m2 = 0.0;
};

SlRow sl_row(double shift) {
    SlRow row;
    row.shift = shift;
    const double s = std::abs(shift);
    row.whole = static_cast<long>(std::floor(s));
    row.r = s - static_cast<double>(row.whole);
    // The strip sits at the downwind end of its cell, xi in [-1/2, 1/2].
    const double lo = shift > 0.0 ? 0.5 - row.r : -0.5;
    const double hi = lo + row.r;
    row.m1 = 0.5 * (hi * hi - lo * lo);
    row.m2 = (hi * hi * hi - lo * lo * lo) / 3.0 - row.r / 12.0;
    return row;
}

// Signed mass through face `face` (between cells face-1 and face). `at(j)`
// reads cell j of the row. The two edge cells use their plain average so
// nothing comes in from the zero exterior, and each strip is clipped to
// [0, f_j] so the donor cell cannot go negative.
template <class At>
double sl_face_flux(const SlRow& row, long face, long n, At&& at) {
    auto cell = [&](long j) { return (j >= 0 && j < n) ? at(j) : 0.0; };
    const bool right = row.shift > 0.0;
    auto upwind = [&](long k) { return right ? face - 1 - k : face + k; };
    double total = 0.0;
    for (long k = 0; k < row.whole; ++k) total += cell(upwind(k));
    if (row.r > 0.0) {
        const long j = upwind(row.whole);
        const double fj = cell(j);
        double part = row.r * fj;
        if (j > 0 && j < n - 1) {
            const double fl = at(j - 1), fr = at(j + 1);
            part += 0.5 * (fr - fl) * row.m1 + 0.5 * (fr - 2.0 * fj + fl) * row.m2;
            part = std::clamp(part, 0.0, std::max(fj, 0.0));
        }
        total += part;
    }
    return right ? total : -total;
}

// B(z) = z / (e^z - 1), with B(0) = 1.
double bernoulli(double z) {
    if (std::abs(z) < 1e-6) return 1.0 - 0.5 * z;
    if (z > 700.0) return z * std::exp(-z);
    return z / std::expm1(z);
}

}  // namespace

std::string_view kind_name(Kind kind) {
    switch (kind) {
        case Kind::MfPso: return "mf_pso";
        case Kind::MfPsoMemory: return "mf_pso_memory";
        case Kind::MfCbo: return "mf_cbo";
        case Kind::MfCboLocalBest: return "mf_cbo_local_best";
    }
    return "mf_pso";
}

Kind parse_kind(std::string_view name) {
    const std::string s = lower_copy(name);
    if (s == "mf_pso") return Kind::MfPso;
    if (s == "mf_pso_memory") return Kind::MfPsoMemory;
    if (s == "mf_cbo") return Kind::MfCbo;
    if (s == "mf_cbo_local_best") return Kind::MfCboLocalBest;
    throw std::invalid_argument("unknown mean-field kind '" + std::string(name) + "'");
}

std::string_view splitting_name(Splitting s) { return s == Splitting::Lie ? "lie" : "strang"; }

std::string_view vflux_name(VFlux f) {
    switch (f) {
        case VFlux::Central: return "central";
        case VFlux::Fitted: return "fitted";
        case VFlux::Auto: return "auto";
    }
    return "auto";
}

VFlux parse_vflux(std::string_view name) {
    const std::string s = lower_copy(name);
    if (s == "central") return VFlux::Central;
    if (s == "fitted") return VFlux::Fitted;
    if (s == "auto") return VFlux::Auto;
    throw std::invalid_argument("unknown v flux '" + std::string(name) + "'");
}

Splitting parse_splitting(std::string_view name) {
    const std::string s = lower_copy(name);
    if (s == "lie") return Splitting::Lie;
    if (s == "strang") return Splitting::Strang;
    throw std::invalid_argument("unknown splitting '" + std::string(name) + "'");
}

void validate(const PhaseGrid& grid, Kind kind) {
    auto check_axis = [](const Axis& a, const char* name) {
        if (!(a.lower < a.upper)) throw std::invalid_argument(std::string("grid.") + name + ": lower must be below upper");
        if (a.cells < 8) throw std::invalid_argument(std::string("grid.") + name + ".cells: must be at least 8");
    };
    check_axis(grid.x, "x");
    if (has_y(kind)) {
        check_axis(grid.y, "y");
        // The memory variable starts on the diagonal, which needs matching cells.
        if (!(grid.y == grid.x)) throw std::invalid_argument("grid.y: must match grid.x");
    }
    if (has_v(kind)) check_axis(grid.v, "v");
    if (!(grid.dt > 0.0)) throw std::invalid_argument("grid.dt: must be positive");
    if (!(grid.implicit_theta >= 0.5 && grid.implicit_theta <= 1.0))
        throw std::invalid_argument("grid.theta: must lie in [0.5, 1]");
}

DensityField::DensityField(std::vector<LabeledAxis> a, double t) : axes(std::move(a)), time(t) {
    std::size_t n = 1;
    for (const auto& ax : axes) n *= ax.axis.cells;
    values.assign(n, 0.0);
}

std::optional<std::size_t> DensityField::find(char label) const {
    for (std::size_t i = 0; i < axes.size(); ++i)
        if (axes[i].label == label) return i;
    return std::nullopt;
}

const Axis& DensityField::axis(char label) const { return axes[require_axis(*this, label)].axis; }

std::string DensityField::labels() const {
    std::string s;
    for (const auto& a : axes) s.push_back(a.label);
    return s;
}

double DensityField::cell_volume() const {
    double vol = 1.0;
    for (const auto& a : axes) vol *= a.axis.width();
    return vol;
}

double DensityField::mass() const {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum * cell_volume();
}

double DensityField::max_value() const {
    return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

double DensityField::min_value() const {
    return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

DensityField make_field(Kind kind, const PhaseGrid& grid) {
    std::vector<LabeledAxis> axes{{'x', grid.x}};
    if (has_y(kind)) axes.push_back({'y', grid.y});
    if (has_v(kind)) axes.push_back({'v', grid.v});
    return DensityField(std::move(axes));
}

DensityField initial_density(Kind kind, const PhaseGrid& grid, const InitialLaw& law) {
    validate(grid, kind);
    DensityField field = make_field(kind, grid);

    const Axis& ax = grid.x;
    std::vector<double> gx(ax.cells);
    for (std::size_t i = 0; i < ax.cells; ++i) {
        const double a = ax.face(i), b = ax.face(i + 1);
        switch (law.position) {
            case InitialLaw::Position::UniformBox: gx[i] = b - a; break;
            case InitialLaw::Position::Uniform: gx[i] = uniform_overlap(a, b, law.x_lower, law.x_upper); break;
            case InitialLaw::Position::Gaussian: gx[i] = gaussian_mass(a, b, law.x_mean, law.x_std); break;
        }
    }

    std::vector<double> hv{1.0};
    if (has_v(kind)) {
        const Axis& av = grid.v;
        hv.assign(av.cells, 0.0);
        if (law.velocity == InitialLaw::Velocity::Zero || !(law.v_scale > 0.0))
            throw std::invalid_argument("solver.init.velocity: the kinetic density needs a Gaussian or uniform velocity law");
        for (std::size_t j = 0; j < av.cells; ++j) {
            const double a = av.face(j), b = av.face(j + 1);
            hv[j] = law.velocity == InitialLaw::Velocity::Gaussian
                        ? gaussian_mass(a, b, 0.0, law.v_scale)
                        : uniform_overlap(a, b, -law.v_scale, law.v_scale);
        }
    }

    const std::size_t nv = hv.size();
    const std::size_t ny = has_y(kind) ? grid.y.cells : 1;
    for (std::size_t ix = 0; ix < ax.cells; ++ix) {
        // Memory kinds: all mass on the diagonal cell iy == ix.
        const std::size_t iy = has_y(kind) ? ix : 0;
        for (std::size_t j = 0; j < nv; ++j) field.values[(ix * ny + iy) * nv + j] = gx[ix] * hv[j];
    }
    const double m = field.mass();
    if (!(m > 0.0)) throw std::invalid_argument("solver.init: initial law has no mass on the grid");
    for (double& v : field.values) v /= m;
    return field;
}

DensityField marginal(const DensityField& field, std::string_view keep) {
    std::vector<bool> kept(field.rank(), false);
    std::vector<LabeledAxis> axes;
    for (std::size_t i = 0; i < field.rank(); ++i) {
        if (keep.find(field.axes[i].label) != std::string_view::npos) {
            kept[i] = true;
            axes.push_back(field.axes[i]);
        }
    }
    for (char c : keep)
        if (!field.find(c)) throw std::invalid_argument(std::string("density field has no '") + c + "' axis");

    DensityField out(std::move(axes), field.time);
    double dropped_volume = 1.0;
    for (std::size_t i = 0; i < field.rank(); ++i)
        if (!kept[i]) dropped_volume *= field.axes[i].axis.width();

    if (out.rank() == 1) {
        const Stride s = stride_of(field, *field.find(out.axes[0].label));
        const double* src = field.values.data();
        for (std::size_t o = 0; o < s.outer; ++o)
            for (std::size_t i = 0; i < s.n; ++i) {
                const double* row = src + (o * s.n + i) * s.inner;
                double acc = 0.0;
                for (std::size_t k = 0; k < s.inner; ++k) acc += row[k];
                out.values[i] += acc;
            }
        for (double& v : out.values) v *= dropped_volume;
        return out;
    }

    std::vector<std::size_t> idx(field.rank(), 0);
    for (std::size_t flat = 0; flat < field.values.size(); ++flat) {
        std::size_t target = 0;
        for (std::size_t i = 0; i < field.rank(); ++i)
            if (kept[i]) target = target * field.extent(i) + idx[i];
        out.values[target] += field.values[flat];
        for (std::size_t i = field.rank(); i-- > 0;) {
            if (++idx[i] < field.extent(i)) break;
            idx[i] = 0;
        }
    }
    for (double& v : out.values) v *= dropped_volume;
    return out;
}

double consensus_from_density(const DensityField& field, char label,
                              std::span<const double> costs_on_axis, double alpha) {
    const DensityField rho = marginal(field, std::string(1, label));
    const Axis& axis = rho.axes[0].axis;
    if (costs_on_axis.size() != axis.cells)
        throw std::invalid_argument("consensus_from_density: cost vector does not match the axis");

    double cmin = std::numeric_limits<double>::infinity();
    double mass = 0.0;
    for (std::size_t i = 0; i < axis.cells; ++i) {
        if (std::isnan(costs_on_axis[i])) throw std::invalid_argument("consensus_from_density: NaN cost");
        if (rho.values[i] > 0.0) {
            cmin = std::min(cmin, costs_on_axis[i]);
            mass += rho.values[i];
        }
    }
    if (!(mass > 0.0)) throw std::domain_error("consensus_from_density: marginal has zero mass");

    double wsum = 0.0, num = 0.0;
    for (std::size_t i = 0; i < axis.cells; ++i) {
        const double q = std::max(rho.values[i], 0.0);
        if (q == 0.0) continue;
        const double w = std::exp(-alpha * (costs_on_axis[i] - cmin)) * q;
        wsum += w;
        num += w * axis.center(i);
    }
    const double xbar = num / wsum;
    return std::clamp(xbar, axis.center(0), axis.center(axis.cells - 1));
}

double consensus_from_density(const DensityField& field, char label,
                              const ObjectiveSpec& objective, double alpha) {
    const auto costs = axis_costs(field.axis(label), objective, false);
    return consensus_from_density(field, label, costs, alpha);
}

void transport_x_step(DensityField& field, double dt) {
    const std::size_t ax = require_axis(field, 'x');
    const std::size_t av = require_axis(field, 'v');
    if (ax != 0) throw std::invalid_argument("transport_x_step: x must be the first axis");
    const Stride s = stride_of(field, ax);
    const Axis& xa = field.axes[ax].axis;
    const Axis& va = field.axes[av].axis;
    const std::size_t nv = va.cells;
    const long n = static_cast<long>(s.n);
    const std::size_t inner = s.inner;
    const double dx = xa.width();

    std::vector<SlRow> rows(nv);
    for (std::size_t j = 0; j < nv; ++j) rows[j] = sl_row(va.center(j) * dt / dx);
    // Reused across calls; a fresh 8 MB copy per step is mostly page faults.
    thread_local std::vector<double> old;
    old.assign(field.values.begin(), field.values.end());

    // Each inner index (y, v) is one x-row; sweep the faces over contiguous
    // blocks of rows.
    constexpr std::size_t kBlock = 256;
    const std::size_t blocks = (inner + kBlock - 1) / kBlock;
#pragma omp parallel
    {
        std::vector<double> prev(kBlock), cur(kBlock);
#pragma omp for schedule(static)
        for (std::size_t blk = 0; blk < blocks; ++blk) {
            const std::size_t k0 = blk * kBlock;
            const std::size_t k1 = std::min(inner, k0 + kBlock);
            for (long face = 0; face <= n; ++face) {
                std::size_t kv = k0 % nv;
                for (std::size_t k = k0; k < k1; ++k, kv = (kv + 1 == nv ? 0 : kv + 1)) {
                    const SlRow& row = rows[kv];
                    double out = 0.0;
                    if (row.whole == 0) {
                        // Sub-cell shift with an interior donor: the common case.
                        const long j = row.shift > 0.0 ? face - 1 : face;
                        if (j > 0 && j < n - 1) {
                            const double* q = old.data() + static_cast<std::size_t>(j) * inner + k;
                            const double fl = q[-static_cast<std::ptrdiff_t>(inner)], fj = q[0], fr = q[inner];
                            double part = row.r * fj + 0.5 * (fr - fl) * row.m1 +
                                          0.5 * (fr - 2.0 * fj + fl) * row.m2;
                            part = std::clamp(part, 0.0, std::max(fj, 0.0));
                            out = row.shift > 0.0 ? part : -part;
                            cur[k - k0] = out;
                            continue;
                        }
                    }
                    if (row.shift != 0.0)
                        out = sl_face_flux(row, face, n, [&](long jj) {
                            return old[static_cast<std::size_t>(jj) * inner + k];
                        });
                    cur[k - k0] = out;
                }
                if (face > 0) {
                    double* dst = field.values.data() + static_cast<std::size_t>(face - 1) * inner;
                    for (std::size_t k = k0; k < k1; ++k) dst[k] -= cur[k - k0] - prev[k - k0];
                }
                std::swap(prev, cur);
            }
        }
    }
}

void fokker_planck_column(std::span<double> column, const Axis& v, double friction, double drift,
                          double diffusion, double dt, double implicit_theta, VFlux flux) {
    const std::size_t n = column.size();
    if (n != v.cells) throw std::invalid_argument("fokker_planck_column: column does not match the v axis");
    if (n == 1) return;
    thread_local std::vector<double> a, b, cprime;
    a.resize(n);
    b.resize(n);
    cprime.resize(n);
    const double dv = v.width();
    const double ddv = diffusion / dv;
    // Face j carries F = a_j f_j + b_j f_{j+1}, j = 0..n-2.
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double A = friction * v.face(j + 1) + drift;
        if (flux != VFlux::Fitted) {
            a[j] = 0.5 * A - ddv;
            b[j] = 0.5 * A + ddv;
        } else if (diffusion == 0.0) {
            a[j] = std::min(A, 0.0);
            b[j] = std::max(A, 0.0);
        } else {
            const double P = A / ddv;
            a[j] = -ddv * bernoulli(P);
            b[j] = ddv * bernoulli(-P);
        }
    }
    a[n - 1] = b[n - 1] = 0.0;

    // L f_j = (F_{j+1/2} - F_{j-1/2}) / dv; columns of L sum to zero. Rows are
    // (1 - ti L) f^{n+1} = (1 + te L) f^n, solved by forward elimination.
    const double ti = implicit_theta * dt / dv;
    const double te = (1.0 - implicit_theta) * dt / dv;
    double* f = column.data();
    double prev_up = 0.0, prev_rhs = 0.0, prev_f = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double lo = j > 0 ? -a[j - 1] : 0.0;
        const double up = b[j];
        const double di = a[j] - (j > 0 ? b[j - 1] : 0.0);
        double rhs = f[j];
        if (te != 0.0) {
            double lf = di * f[j] + up * (j + 1 < n ? f[j + 1] : 0.0);
            if (j > 0) lf += lo * prev_f;
            rhs += te * lf;
        }
        prev_f = f[j];
        const double l = -ti * lo;
        const double pivot = (1.0 - ti * di) - l * prev_up;
        if (!(pivot != 0.0) || !std::isfinite(pivot)) throw std::domain_error("singular tridiagonal system");
        const double inv = 1.0 / pivot;
        prev_up = -ti * up * inv;
        cprime[j] = prev_up;
        prev_rhs = (rhs - l * prev_rhs) * inv;
        f[j] = prev_rhs;
    }
    for (std::size_t j = n - 1; j-- > 0;) f[j] -= cprime[j] * f[j + 1];
}

void fokker_planck_v_step(DensityField& field, double consensus, const SolverParams& params,
                          double dt, double implicit_theta, VFlux flux) {
    if (!(params.m > 0.0)) throw std::invalid_argument("solver.m: the kinetic mean-field model needs m > 0");
    const std::size_t av = require_axis(field, 'v');
    if (av + 1 != field.rank()) throw std::invalid_argument("fokker_planck_v_step: v must be the last axis");
    const Axis& va = field.axes[av].axis;
    const Axis& xa = field.axis('x');
    const auto ay = field.find('y');
    const std::size_t nv = va.cells;
    const std::size_t ny = ay ? field.extent(*ay) : 1;
    const std::size_t columns = field.values.size() / nv;
    const double m = params.m;
    const double friction = params.gamma / m;
    const double m2 = 2.0 * m * m;
    const double floor = -1e-9 * field.max_value();

#pragma omp parallel
    {
    std::vector<double> saved(nv);
#pragma omp for schedule(static)
    for (std::size_t c = 0; c < columns; ++c) {
        const double x = xa.center(c / ny);
        double drift, diffusion;
        if (ay) {
            const double y = field.axes[*ay].axis.center(c % ny);
            drift = params.lambda1 / m * (x - y) + params.lambda2 / m * (x - consensus);
            diffusion = (params.sigma2 * params.sigma2 * (x - consensus) * (x - consensus) +
                         params.sigma1 * params.sigma1 * (x - y) * (x - y)) / m2;
        } else {
            drift = params.lambda2 / m * (x - consensus);
            diffusion = params.sigma2 * params.sigma2 * (x - consensus) * (x - consensus) / m2;
        }
        const std::span<double> col(field.values.data() + c * nv, nv);
        if (std::all_of(col.begin(), col.end(), [](double q) { return q == 0.0; })) continue;
        if (flux == VFlux::Auto) std::copy(col.begin(), col.end(), saved.begin());
        fokker_planck_column(col, va, friction, drift, diffusion, dt, implicit_theta, flux);
        if (flux == VFlux::Auto && *std::min_element(col.begin(), col.end()) < floor) {
            std::copy(saved.begin(), saved.end(), col.begin());
            fokker_planck_column(col, va, friction, drift, diffusion, dt, implicit_theta, VFlux::Fitted);
        }
    }
    }
}

void memory_advection_y_step(DensityField& field, const SolverParams& params,
                             const ObjectiveSpec& objective, double dt) {
    const std::size_t ax = require_axis(field, 'x');
    const std::size_t ay = require_axis(field, 'y');
    const Axis& xa = field.axes[ax].axis;
    const Axis& ya = field.axes[ay].axis;
    const Stride s = stride_of(field, ay);  // outer = x cells, inner = v cells (or 1)
    const std::size_t ny = ya.cells;
    const double dy = ya.width();
    const auto fx = axis_costs(xa, objective, false);
    const auto fy_face = axis_costs(ya, objective, true);

    // Speeds per x cell and y face.
    std::vector<double> c_face(xa.cells * (ny + 1));
    double cmax = 0.0;
    for (std::size_t ix = 0; ix < xa.cells; ++ix) {
        const double x = xa.center(ix);
        for (std::size_t j = 0; j <= ny; ++j) {
            const double c = params.nu * (x - ya.face(j)) * memory_switch(fx[ix], fy_face[j], params.beta);
            c_face[ix * (ny + 1) + j] = c;
            cmax = std::max(cmax, std::abs(c));
        }
    }
    check_cfl(cmax, dt, dy, "memory advection");

#pragma omp parallel
    {
        std::vector<double> flux;
#pragma omp for schedule(static)
        for (std::size_t line = 0; line < s.outer * s.inner; ++line) {
            const std::size_t ix = line / s.inner;
            const std::size_t k = line % s.inner;
            double* f = field.values.data() + ix * ny * s.inner + k;
            lax_wendroff_line(f, ny, s.inner, &c_face[ix * (ny + 1)], dt, dy, flux);
        }
    }
}

void cbo_drift_x_step(DensityField& field, double consensus, const SolverParams& params, double dt) {
    const std::size_t ax = require_axis(field, 'x');
    if (ax != 0) throw std::invalid_argument("cbo_drift_x_step: x must be the first axis");
    const Axis& xa = field.axes[ax].axis;
    const auto ay = field.find('y');
    const Stride s = stride_of(field, ax);
    const std::size_t nx = xa.cells;
    const double dx = xa.width();
    // Local-best variant: speed lambda1 (y - x) + lambda2 (ybar - x); else lambda (xbar - x).
    const bool local = ay.has_value();
    const double lam1 = local ? params.lambda1 : 0.0;
    const double lam2 = params.lambda2;
    auto speed = [&](double x, double y) { return lam1 * (y - x) + lam2 * (consensus - x); };

    double cmax = 0.0;
    for (std::size_t k = 0; k < s.inner; ++k) {
        const double y = local ? field.axes[*ay].axis.center(k) : 0.0;
        cmax = std::max({cmax, std::abs(speed(xa.lower, y)), std::abs(speed(xa.upper, y))});
    }
    check_cfl(cmax, dt, dx, "consensus drift");

#pragma omp parallel
    {
        std::vector<double> cf(nx + 1), flux;
#pragma omp for schedule(static)
        for (std::size_t k = 0; k < s.inner; ++k) {
            const double y = local ? field.axes[*ay].axis.center(k) : 0.0;
            for (std::size_t i = 0; i <= nx; ++i) cf[i] = speed(xa.face(i), y);
            lax_wendroff_line(field.values.data() + k, nx, s.inner, cf.data(), dt, dx, flux);
        }
    }
}

void cbo_diffusion_x_step(DensityField& field, double consensus, const SolverParams& params,
                          double dt, double implicit_theta) {
    const std::size_t ax = require_axis(field, 'x');
    if (ax != 0) throw std::invalid_argument("cbo_diffusion_x_step: x must be the first axis");
    const Axis& xa = field.axes[ax].axis;
    const auto ay = field.find('y');
    const Stride s = stride_of(field, ax);
    const std::size_t nx = xa.cells;
    const double dx2 = xa.width() * xa.width();
    const bool local = ay.has_value();

#pragma omp parallel
    {
        Tridiagonal sys;
        std::vector<double> kappa(nx), line(nx), scratch;
#pragma omp for schedule(static)
        for (std::size_t k = 0; k < s.inner; ++k) {
            const double y = local ? field.axes[*ay].axis.center(k) : 0.0;
            for (std::size_t i = 0; i < nx; ++i) {
                const double x = xa.center(i);
                double sq = params.sigma2 * params.sigma2 * (x - consensus) * (x - consensus);
                if (local) sq += params.sigma1 * params.sigma1 * (x - y) * (x - y);
                kappa[i] = 0.5 * sq;
            }
            double* base = field.values.data() + k;
            for (std::size_t i = 0; i < nx; ++i) line[i] = base[i * s.inner];
            // d/dt rho_i = (kappa rho)_{i+1} - 2 (kappa rho)_i + (kappa rho)_{i-1}, over dx^2,
            // with no flux through the outer faces so the columns of the operator sum to zero.
            sys.resize(nx);
            const double ti = implicit_theta * dt / dx2;
            const double te = (1.0 - implicit_theta) * dt / dx2;
            std::vector<double>& rhs = scratch;
            rhs.assign(line.begin(), line.end());
            for (std::size_t i = 0; i < nx; ++i) {
                const double faces = double((i > 0) + (i + 1 < nx));
                sys.lower[i] = i > 0 ? -ti * kappa[i - 1] : 0.0;
                sys.diag[i] = 1.0 + faces * ti * kappa[i];
                sys.upper[i] = i + 1 < nx ? -ti * kappa[i + 1] : 0.0;
                if (te != 0.0) {
                    double lf = -faces * kappa[i] * line[i];
                    if (i > 0) lf += kappa[i - 1] * line[i - 1];
                    if (i + 1 < nx) lf += kappa[i + 1] * line[i + 1];
                    rhs[i] += te * lf;
                }
            }
            std::vector<double> work;
            sys.solve(rhs, work);
            for (std::size_t i = 0; i < nx; ++i) base[i * s.inner] = rhs[i];
        }
    }
}

namespace {

// Consensus used by the split step: the start-of-step value for Lie, and a
// linear extrapolation to the half step for Strang.
double step_consensus(double start, std::optional<double> previous, Splitting splitting) {
    if (splitting == Splitting::Strang && previous) return 1.5 * start - 0.5 * *previous;
    return start;
}

}  // namespace

double mf_pso_step(DensityField& field, const SolverParams& params, const PhaseGrid& grid,
                   const ObjectiveSpec& objective, std::optional<double> previous_consensus) {
    const bool memory = field.find('y').has_value();
    const double dt = grid.dt;
    const double start = consensus_from_density(field, memory ? 'y' : 'x', objective, params.alpha);
    const double cons = step_consensus(start, previous_consensus, grid.splitting);
    if (grid.splitting == Splitting::Lie) {
        transport_x_step(field, dt);
        if (memory) memory_advection_y_step(field, params, objective, dt);
        fokker_planck_v_step(field, cons, params, dt, grid.implicit_theta, grid.v_flux);
    } else {
        transport_x_step(field, 0.5 * dt);
        if (memory) memory_advection_y_step(field, params, objective, 0.5 * dt);
        fokker_planck_v_step(field, cons, params, dt, grid.implicit_theta, grid.v_flux);
        if (memory) memory_advection_y_step(field, params, objective, 0.5 * dt);
        transport_x_step(field, 0.5 * dt);
    }
    field.time += dt;
    return start;
}

double mf_cbo_step(DensityField& field, const SolverParams& params, const PhaseGrid& grid,
                   const ObjectiveSpec& objective, std::optional<double> previous_consensus) {
    const bool memory = field.find('y').has_value();
    const double dt = grid.dt;
    const double start = consensus_from_density(field, memory ? 'y' : 'x', objective, params.alpha);
    const double cons = step_consensus(start, previous_consensus, grid.splitting);
    if (grid.splitting == Splitting::Lie) {
        cbo_drift_x_step(field, cons, params, dt);
        cbo_diffusion_x_step(field, cons, params, dt, grid.implicit_theta);
        if (memory) memory_advection_y_step(field, params, objective, dt);
    } else {
        if (memory) memory_advection_y_step(field, params, objective, 0.5 * dt);
        cbo_drift_x_step(field, cons, params, 0.5 * dt);
        cbo_diffusion_x_step(field, cons, params, dt, grid.implicit_theta);
        cbo_drift_x_step(field, cons, params, 0.5 * dt);
        if (memory) memory_advection_y_step(field, params, objective, 0.5 * dt);
    }
    field.time += dt;
    return start;
}

std::vector<double> maxwellian_profile(double x, double consensus, double sigma, double eps,
                                       const Axis& v) {
    if (!(eps > 0.0)) throw std::invalid_argument("maxwellian_profile: eps must be positive");
    std::vector<double> out(v.cells, 0.0);
    const double dv = v.width();
    const double var = sigma * sigma * (x - consensus) * (x - consensus) / (2.0 * eps);
    if (!(var > 0.0)) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < v.cells; ++j)
            if (std::abs(v.center(j)) < std::abs(v.center(best))) best = j;
        out[best] = 1.0 / dv;
        return out;
    }
    double sum = 0.0;
    for (std::size_t j = 0; j < v.cells; ++j) {
        const double c = v.center(j);
        out[j] = std::exp(-c * c / (2.0 * var));
        sum += out[j];
    }
    if (!(sum > 0.0)) throw std::domain_error("maxwellian_profile: width below grid resolution");
    for (double& o : out) o /= sum * dv;
    return out;
}

MeanFieldSolver::MeanFieldSolver(Kind kind, SolverParams params, PhaseGrid grid,
                                 ObjectiveSpec objective, DensityField initial)
    : kind_(kind), params_(params), grid_(grid), objective_(std::move(objective)), field_(std::move(initial)) {
    validate(grid_, kind_);
    validate(objective_);
    if (objective_.dim != 1) throw std::invalid_argument("objective.dim: mean-field solvers need dim = 1");
    if (has_v(kind_) && !(params_.m > 0.0))
        throw std::invalid_argument("solver.m: the kinetic mean-field model needs m > 0");
    if (field_.labels() != make_field(kind_, grid_).labels())
        throw std::invalid_argument("initial density does not match the grid kind");
}

void MeanFieldSolver::step() {
    const double start = has_v(kind_) ? mf_pso_step(field_, params_, grid_, objective_, previous_)
                                      : mf_cbo_step(field_, params_, grid_, objective_, previous_);
    previous_ = start;
    last_consensus_ = start;
    ++steps_;
    const double mx = field_.max_value();
    if (mx > 0.0) worst_undershoot_ = std::min(worst_undershoot_, field_.min_value() / mx);
}

void MeanFieldSolver::advance_to(double t) {
    while (field_.time + 0.5 * grid_.dt < t) step();
}

DensityField particle_histogram(std::span<const double> coords, std::size_t stride,
                                std::size_t component, const Axis& axis, char label) {
    if (stride == 0 || component >= stride || coords.size() % stride != 0)
        throw std::invalid_argument("particle_histogram: bad stride");
    const std::size_t n = coords.size() / stride;
    DensityField out({{label, axis}});
    if (n == 0) return out;
    const double dx = axis.width();
    for (std::size_t i = 0; i < n; ++i) {
        const double p = coords[i * stride + component];
        if (!(p >= axis.lower && p < axis.upper)) continue;
        auto cell = static_cast<std::size_t>((p - axis.lower) / dx);
        if (cell >= axis.cells) cell = axis.cells - 1;
        out.values[cell] += 1.0;
    }
    const double scale = 1.0 / (static_cast<double>(n) * dx);
    for (double& v : out.values) v *= scale;
    return out;
}

double l1_distance(const DensityField& a, const DensityField& b) {
    if (a.axes != b.axes) throw std::invalid_argument("l1_distance: fields live on different grids");
    double sum = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) sum += std::abs(a.values[i] - b.values[i]);
    return sum * a.cell_volume();
}

}  // namespace swarmkit::pde
