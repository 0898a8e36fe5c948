#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "consensus.hpp"
#include "meanfield.hpp"

using namespace swarmkit;
using namespace swarmkit::pde;

namespace {

SolverParams case1() {
    SolverParams p;
    p.set_inertia(0.5);
    p.lambda2 = 1.0;
    p.sigma2 = 1.0 / std::sqrt(3.0);
    p.alpha = 30.0;
    return p;
}

InitialLaw gaussian_v(double scale = 0.5) {
    InitialLaw law;
    law.velocity = InitialLaw::Velocity::Gaussian;
    law.v_scale = scale;
    return law;
}

DensityField xv_field(const Axis& x, const Axis& v) { return DensityField({{'x', x}, {'v', v}}); }

double& at(DensityField& f, std::size_t i, std::size_t j) { return f.values[i * f.extent(1) + j]; }

double column_mass(const DensityField& f, std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < f.extent(1); ++j) s += f.values[i * f.extent(1) + j];
    return s;
}

// Cell average of a normalized Gaussian by fine midpoint quadrature.
double gauss_avg(double a, double b, double mu, double s) {
    const int n = 64;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = a + (b - a) * (k + 0.5) / n;
        sum += std::exp(-0.5 * (x - mu) * (x - mu) / (s * s));
    }
    return sum / n / (s * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

TEST_CASE("grid validation") {
    PhaseGrid g;
    CHECK_NOTHROW(validate(g, Kind::MfPso));
    g.x.cells = 4;
    CHECK_THROWS_WITH_AS(validate(g, Kind::MfPso), doctest::Contains("grid.x.cells"), std::invalid_argument);
    g = PhaseGrid{};
    g.y.cells = 60;
    CHECK_NOTHROW(validate(g, Kind::MfPso));
    CHECK_THROWS_WITH_AS(validate(g, Kind::MfPsoMemory), doctest::Contains("grid.y"), std::invalid_argument);
    g = PhaseGrid{};
    g.dt = 0.0;
    CHECK_THROWS_AS(validate(g, Kind::MfCbo), std::invalid_argument);
    g = PhaseGrid{};
    g.implicit_theta = 0.2;
    CHECK_THROWS_AS(validate(g, Kind::MfCbo), std::invalid_argument);
    for (Kind k : {Kind::MfPso, Kind::MfPsoMemory, Kind::MfCbo, Kind::MfCboLocalBest}) CHECK(parse_kind(kind_name(k)) == k);
    CHECK(parse_splitting("Strang") == Splitting::Strang);
    CHECK(parse_vflux(vflux_name(VFlux::Fitted)) == VFlux::Fitted);
}

TEST_CASE("initial densities have unit mass and the right support") {
    PhaseGrid g;
    g.x = {-3.0, 3.0, 30};
    g.y = g.x;
    g.v = {-4.0, 4.0, 24};
    for (Kind k : {Kind::MfPso, Kind::MfPsoMemory, Kind::MfCbo, Kind::MfCboLocalBest}) {
        const auto f = initial_density(k, g, gaussian_v());
        CHECK(std::abs(f.mass() - 1.0) <= 1e-10);
        CHECK(f.min_value() >= 0.0);
    }
    const auto mem = initial_density(Kind::MfPsoMemory, g, gaussian_v());
    CHECK(mem.labels() == "xyv");
    for (std::size_t ix = 0; ix < 30; ++ix)
        for (std::size_t iy = 0; iy < 30; ++iy)
            for (std::size_t j = 0; j < 24; ++j)
                if (ix != iy) REQUIRE(mem.values[(ix * 30 + iy) * 24 + j] == 0.0);

    CHECK_THROWS_AS(initial_density(Kind::MfPso, g, InitialLaw{}), std::invalid_argument);
    CHECK_NOTHROW(initial_density(Kind::MfCbo, g, InitialLaw{}));
}

TEST_CASE("marginals") {
    PhaseGrid g;
    g.x = {-3.0, 3.0, 20};
    g.v = {-4.0, 4.0, 16};
    const auto f = initial_density(Kind::MfPso, g, gaussian_v(0.8));
    const auto rho = marginal(f, "x");
    CHECK(std::abs(rho.mass() - 1.0) <= 1e-10);

    // Separable: every column is the same v-profile, so rho is proportional to the x-factor.
    InitialLaw law = gaussian_v(0.8);
    law.position = InitialLaw::Position::Gaussian;
    law.x_std = 0.7;
    const auto sep = initial_density(Kind::MfPso, g, law);
    const auto r = marginal(sep, "x");
    const double ratio = r.values[3] / column_mass(sep, 3);
    for (std::size_t i = 0; i < 20; ++i) CHECK(r.values[i] == doctest::Approx(ratio * column_mass(sep, i)).epsilon(1e-13));

    // Random three-axis field against nested loops.
    DensityField h({{'x', Axis{-1.0, 1.0, 5}}, {'y', Axis{0.0, 2.0, 4}}, {'v', Axis{-2.0, 2.0, 3}}});
    std::mt19937_64 gen(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : h.values) v = u(gen);
    for (const char* keep : {"x", "y", "v", "xy", "xv", "yv"}) {
        const auto m = marginal(h, keep);
        const std::string k(keep);
        std::vector<double> want(m.values.size(), 0.0);
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = 0; b < 4; ++b)
                for (std::size_t c = 0; c < 3; ++c) {
                    const double val = h.values[(a * 4 + b) * 3 + c];
                    std::size_t idx = 0;
                    double vol = 1.0;
                    if (k.find('x') != std::string::npos) idx = idx * 5 + a; else vol *= 0.4;
                    if (k.find('y') != std::string::npos) idx = idx * 4 + b; else vol *= 0.5;
                    if (k.find('v') != std::string::npos) idx = idx * 3 + c; else vol *= 4.0 / 3.0;
                    want[idx] += val * vol;
                }
        for (std::size_t i = 0; i < want.size(); ++i) CHECK(std::abs(m.values[i] - want[i]) <= 1e-14);
    }
    CHECK_THROWS_AS(marginal(h, "z"), std::invalid_argument);
}

TEST_CASE("consensus from a density") {
    const Axis ax{-3.1, 3.1, 31};  // cell 20 is centred on x = 1
    DensityField rho({{'x', ax}});
    std::vector<double> costs(31);
    for (std::size_t i = 0; i < 31; ++i) costs[i] = std::pow(ax.center(i), 2);

    for (std::size_t i = 0; i < 31; ++i) rho.values[i] = std::exp(-ax.center(i) * ax.center(i));
    CHECK(std::abs(consensus_from_density(rho, 'x', costs, 0.0)) <= 1e-12);

    std::fill(rho.values.begin(), rho.values.end(), 0.0);
    rho.values[20] = 5.0;
    CHECK(consensus_from_density(rho, 'x', costs, 30.0) == doctest::Approx(1.0).epsilon(1e-14));

    // Particle formula on cell-centre atoms weighted by the cell values.
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (double& v : rho.values) v = u(gen);
    for (double& c : costs) c = 2.0 * u(gen);
    long double num = 0.0L, den = 0.0L;
    for (std::size_t i = 0; i < 31; ++i) {
        const long double w = std::exp(-30.0L * costs[i]) * rho.values[i];
        num += w * ax.center(i);
        den += w;
    }
    CHECK(std::abs(consensus_from_density(rho, 'x', costs, 30.0) - double(num / den)) <= 1e-12);

    std::fill(rho.values.begin(), rho.values.end(), 0.0);
    CHECK_THROWS_AS(consensus_from_density(rho, 'x', costs, 1.0), std::domain_error);
    CHECK_THROWS_AS(consensus_from_density(rho, 'x', std::vector<double>(3), 1.0), std::invalid_argument);
}

TEST_CASE("density consensus equals particle consensus for particles at cell centres") {
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    const Axis ax{-3.0, 3.0, 90};
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> u(-2.5, 2.5);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> pts(12), costs(12);
        DensityField rho({{'x', ax}});
        for (std::size_t i = 0; i < 12; ++i) {
            const auto cell = static_cast<std::size_t>((u(gen) - ax.lower) / ax.width());
            pts[i] = ax.center(cell);
            costs[i] = evaluate(obj, std::span<const double>(&pts[i], 1));
            rho.values[cell] += 1.0;
        }
        ConsensusParams cp;
        cp.alpha = 30.0;
        const double particles = weighted_consensus(pts, 1, costs, cp)[0];
        CHECK(std::abs(consensus_from_density(rho, 'x', obj, 30.0) - particles) <= 1e-12);
    }
}

TEST_CASE("x-transport: rest rows, constants, and exact shifts") {
    const Axis x{-3.0, 3.0, 60};
    const double dx = x.width();
    // v cells centred on 0, +-dx/dt so one step moves exactly one cell.
    const double dt = 0.01;
    const double c = dx / dt;
    const Axis v{-1.5 * c, 1.5 * c, 3};
    auto f = xv_field(x, v);
    for (std::size_t i = 0; i < 60; ++i) {
        const double g = std::exp(-4.0 * x.center(i) * x.center(i));
        at(f, i, 0) = g;
        at(f, i, 1) = g;
        at(f, i, 2) = g;
    }
    const auto before = f;
    transport_x_step(f, dt);
    for (std::size_t i = 0; i < 60; ++i) CHECK(at(f, i, 1) == before.values[i * 3 + 1]);
    for (std::size_t i = 1; i + 1 < 60; ++i) {
        CHECK(std::abs(at(f, i, 2) - before.values[(i - 1) * 3 + 2]) < 1e-12);
        CHECK(std::abs(at(f, i, 0) - before.values[(i + 1) * 3 + 0]) < 1e-12);
    }

    // Constant in x away from the boundary stays constant.
    const Axis w{-0.5, 0.5, 4};
    auto k = xv_field(x, w);
    for (std::size_t i = 10; i < 50; ++i)
        for (std::size_t j = 0; j < 4; ++j) at(k, i, j) = 2.0;
    transport_x_step(k, 0.05);
    for (std::size_t i = 12; i < 48; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(at(k, i, j) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("x-transport conserves interior mass and stays nonnegative") {
    const Axis x{-3.0, 3.0, 90};
    const Axis v{-4.0, 4.0, 40};
    auto f = xv_field(x, v);
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 20; i < 70; ++i)
        for (std::size_t j = 0; j < 40; ++j) at(f, i, j) = u(gen) * u(gen);
    const double m0 = f.mass();
    transport_x_step(f, 0.013);  // several cells per step for the fast rows
    CHECK(std::abs(f.mass() - m0) <= 1e-12 * m0);
    CHECK(f.min_value() >= 0.0);
}

TEST_CASE("Fokker-Planck v-step conserves every column") {
    PhaseGrid g;
    g.x = {-3.0, 3.0, 30};
    g.v = {-4.0, 4.0, 40};
    auto f = initial_density(Kind::MfPso, g, gaussian_v(1.0));
    std::vector<double> before(30);
    for (std::size_t i = 0; i < 30; ++i) before[i] = column_mass(f, i);
    for (VFlux flux : {VFlux::Central, VFlux::Fitted, VFlux::Auto})
        for (double theta : {1.0, 0.5}) {
            auto h = f;
            fokker_planck_v_step(h, 0.3, case1(), 0.01, theta, flux);
            for (std::size_t i = 0; i < 30; ++i)
                CHECK(std::abs(column_mass(h, i) - before[i]) <= 1e-12 * std::max(1.0, before[i]));
        }
}

TEST_CASE("friction alone shrinks the first v-moment at x = xbar") {
    const Axis v{-4.0, 4.0, 80};
    std::vector<double> col(80);
    for (std::size_t j = 0; j < 80; ++j) col[j] = gauss_avg(v.face(j), v.face(j + 1), 1.5, 0.4);
    auto moment = [&] {
        double s = 0.0;
        for (std::size_t j = 0; j < 80; ++j) s += v.center(j) * col[j];
        return std::abs(s);
    };
    double last = moment();
    for (int n = 0; n < 50; ++n) {
        fokker_planck_column(col, v, 1.0, 0.0, 0.0, 0.02, 1.0);
        const double now = moment();
        CHECK(now < last);
        last = now;
    }
}

TEST_CASE("the discrete Maxwellian is stationary up to O(dv^2)") {
    // friction 1/eps, diffusion sigma^2 (x - xbar)^2 / (2 eps^2): equilibrium
    // variance sigma^2 (x - xbar)^2 / (2 eps).
    const double eps = 0.5, sigma = 1.0, x = 1.2;
    auto residual = [&](std::size_t cells) {
        const Axis v{-4.0, 4.0, cells};
        auto m = maxwellian_profile(x, 0.0, sigma, eps, v);
        auto col = m;
        const double D = sigma * sigma * x * x / (2.0 * eps * eps);
        for (int n = 0; n < 400; ++n) fokker_planck_column(col, v, 1.0 / eps, 0.0, D, 0.05, 1.0);
        double s = 0.0;
        for (std::size_t j = 0; j < cells; ++j) s += std::abs(col[j] - m[j]) * v.width();
        return s;
    };
    const double r1 = residual(40), r2 = residual(80);
    CHECK(r1 < 0.01);
    CHECK(r1 / r2 > 3.0);
}

TEST_CASE("maxwellian profile moments") {
    const Axis v{-4.0, 4.0, 120};
    const double eps = 0.5, sigma = 1.0 / std::sqrt(3.0), x = 2.0, xbar = 0.2;
    const auto m = maxwellian_profile(x, xbar, sigma, eps, v);
    double mass = 0.0, first = 0.0, second = 0.0;
    for (std::size_t j = 0; j < 120; ++j) {
        mass += m[j] * v.width();
        first += v.center(j) * m[j] * v.width();
        second += v.center(j) * v.center(j) * m[j] * v.width();
    }
    const double var = sigma * sigma * (x - xbar) * (x - xbar) / (2.0 * eps);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(std::abs(first) <= 1e-12);
    CHECK(second == doctest::Approx(var).epsilon(0.01));

    const auto degenerate = maxwellian_profile(xbar, xbar, sigma, eps, v);
    double total = 0.0;
    for (double q : degenerate) total += q * v.width();
    CHECK(total == doctest::Approx(1.0));
    CHECK(std::count_if(degenerate.begin(), degenerate.end(), [](double q) { return q > 0.0; }) == 1);
    CHECK_THROWS_AS(maxwellian_profile(x, xbar, sigma, 0.0, v), std::invalid_argument);
}

TEST_CASE("memory advection leaves diagonal data and frozen regions alone") {
    const auto obj = make_objective(ObjectiveKind::Rastrigin, 1);
    SolverParams p;
    p.nu = 0.5;
    p.beta = 30.0;
    PhaseGrid g;
    g.x = g.y = {-3.0, 3.0, 30};
    auto f = initial_density(Kind::MfCboLocalBest, g, InitialLaw{});
    const auto before = f;
    memory_advection_y_step(f, p, obj, 0.01);
    CHECK(f.values == before.values);

    // x where F(x) is far above F(y) for every y in a band: S = 0 there.
    const auto ack = make_objective(ObjectiveKind::Ackley, 1);
    p.beta = 3e3;
    DensityField h({{'x', g.x}, {'y', g.y}});
    const std::size_t ix = 29;  // x = 2.9, F about 7.3
    for (std::size_t iy = 12; iy < 18; ++iy) h.values[ix * 30 + iy] = 1.0;  // y near 0, F below 3
    const auto h0 = h;
    memory_advection_y_step(h, p, ack, 0.01);
    CHECK(h.values == h0.values);
}

TEST_CASE("memory advection matches the exact contraction toward x") {
    // x = 0 is the minimiser, so every y face sees S = 2 and the speed is
    // 2 nu (0 - y). The exact solution is f0(y e^{a t}) e^{a t}, a = 2 nu.
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    SolverParams p;
    p.nu = 0.5;
    p.beta = 1e6;
    const Axis ax{-3.0, 3.0, 121};
    DensityField f({{'x', ax}, {'y', ax}});
    const std::size_t ix = 60;
    REQUIRE(std::abs(ax.center(ix)) < 1e-12);
    const double mu = 1.2, s = 0.3;
    for (std::size_t j = 0; j < 121; ++j) f.values[ix * 121 + j] = gauss_avg(ax.face(j), ax.face(j + 1), mu, s);
    const double a = 2.0 * p.nu;
    const double T = std::log(2.0) / a;  // profile compressed by half
    const double dt = 0.005;
    const int steps = static_cast<int>(std::lround(T / dt));
    for (int n = 0; n < steps; ++n) memory_advection_y_step(f, p, obj, dt);
    const double t = steps * dt;
    const double k = std::exp(-a * t);
    double err = 0.0, norm = 0.0;
    for (std::size_t j = 0; j < 121; ++j) {
        // Exact solution is again Gaussian with mean mu k and width s k.
        const double exact = gauss_avg(ax.face(j), ax.face(j + 1), mu * k, s * k);
        err += std::abs(f.values[ix * 121 + j] - exact) * ax.width();
        norm += exact * ax.width();
    }
    CHECK(err / norm < 0.05);
}

TEST_CASE("memory advection refuses a step above the CFL limit") {
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    SolverParams p;
    p.nu = 50.0;
    PhaseGrid g;
    g.x = g.y = {-3.0, 3.0, 30};
    auto f = initial_density(Kind::MfCboLocalBest, g, InitialLaw{});
    CHECK_THROWS_AS(memory_advection_y_step(f, p, obj, 0.01), std::domain_error);
}

TEST_CASE("zero coefficients reduce the kinetic step to transport") {
    SolverParams p;
    p.set_inertia(1.0);
    p.lambda2 = 0.0;
    p.sigma2 = 0.0;
    PhaseGrid g;
    g.x = {-3.0, 3.0, 40};
    g.v = {-2.0, 2.0, 20};
    g.dt = 0.01;
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    auto a = initial_density(Kind::MfPso, g, gaussian_v());
    auto b = a;
    mf_pso_step(a, p, g, obj);
    transport_x_step(b, g.dt);
    CHECK(a.values == b.values);
}

TEST_CASE("Strang splitting converges at second order in time") {
    PhaseGrid g;
    // Fine in x so the interpolation error stays below the splitting error.
    g.x = {-3.0, 3.0, 180};
    g.v = {-4.0, 4.0, 120};
    g.implicit_theta = 0.5;
    g.v_flux = VFlux::Central;
    InitialLaw law = gaussian_v();
    law.position = InitialLaw::Position::Gaussian;
    law.x_std = 0.7;
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    auto solve = [&](double dt) {
        g.dt = dt;
        MeanFieldSolver s(Kind::MfPso, case1(), g, obj, initial_density(Kind::MfPso, g, law));
        s.advance_to(0.4);
        return s.field();
    };
    auto order = [&](Splitting sp) {
        g.splitting = sp;
        const auto f1 = solve(0.02), f2 = solve(0.01), f3 = solve(0.005);
        return std::log2(l1_distance(f1, f2) / l1_distance(f2, f3));
    };
    const double lie = order(Splitting::Lie);
    CHECK(lie > 0.9);
    CHECK(lie < 1.1);
    CHECK(order(Splitting::Strang) >= 1.8);
}

TEST_CASE("Case #1 concentrates at the Ackley minimiser by t = 3") {
    PhaseGrid g;
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    InitialLaw law = gaussian_v();
    MeanFieldSolver s(Kind::MfPso, case1(), g, obj, initial_density(Kind::MfPso, g, law));
    s.advance_to(3.0);
    const auto rho = marginal(s.field(), "x");
    double near = 0.0;
    for (std::size_t i = 0; i < 90; ++i)
        if (std::abs(rho.axes[0].axis.center(i)) < 0.5) near += rho.values[i] * rho.axes[0].axis.width();
    CHECK(near / rho.mass() > 0.5);
    const auto peak = std::max_element(rho.values.begin(), rho.values.end()) - rho.values.begin();
    CHECK(std::abs(rho.axes[0].axis.center(static_cast<std::size_t>(peak))) < 0.1);
    CHECK(std::abs(s.last_consensus()) < 0.05);
    CHECK(s.worst_undershoot() >= -1e-8);
}

TEST_CASE("mean-field CBO: point mass at the consensus is stationary") {
    PhaseGrid g;
    g.x = {-3.1, 3.1, 31};
    SolverParams p = case1();
    p.set_inertia(0.0);
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    DensityField rho({{'x', g.x}});
    rho.values[15] = 1.0 / g.x.width();  // centred on 0
    const auto before = rho;
    for (int n = 0; n < 10; ++n) mf_cbo_step(rho, p, g, obj);
    CHECK(rho.values == before.values);
}

TEST_CASE("mean-field CBO conserves interior mass and concentrates on Ackley") {
    PhaseGrid g;
    g.x = {-3.0, 3.0, 120};
    SolverParams p = case1();
    p.set_inertia(0.0);
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    InitialLaw law;
    law.position = InitialLaw::Position::Uniform;
    law.x_lower = -2.0;
    law.x_upper = 2.0;
    auto rho = initial_density(Kind::MfCbo, g, law);
    for (int n = 0; n < 20; ++n) {
        const double m0 = rho.mass();
        mf_cbo_step(rho, p, g, obj);
        CHECK(std::abs(rho.mass() - m0) <= 1e-10);
    }
    MeanFieldSolver s(Kind::MfCbo, p, g, obj, initial_density(Kind::MfCbo, g, InitialLaw{}));
    s.advance_to(2.0);
    const auto& r = s.field();
    double near = 0.0;
    for (std::size_t i = 0; i < 120; ++i)
        if (std::abs(g.x.center(i)) < 0.5) near += r.values[i] * g.x.width();
    CHECK(near / r.mass() > 0.5);
}

TEST_CASE("(x, v) -> (-x, -v) symmetry is preserved for symmetric data") {
    PhaseGrid g;
    g.x = {-3.0, 3.0, 30};
    g.v = {-4.0, 4.0, 40};
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    MeanFieldSolver s(Kind::MfPso, case1(), g, obj, initial_density(Kind::MfPso, g, gaussian_v()));
    for (int n = 0; n < 100; ++n) {
        s.step();
        const auto& f = s.field();
        double asym = 0.0;
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 40; ++j)
                asym += std::abs(f.values[i * 40 + j] - f.values[(29 - i) * 40 + (39 - j)]);
        REQUIRE(asym * f.cell_volume() <= 1e-8);
    }
}

TEST_CASE("particle histograms and L1 distance") {
    const Axis ax{0.0, 1.0, 4};
    const std::vector<double> pts{0.1, 0.2, 0.3, 0.6, 0.99, 1.5, -0.2, 0.0};
    const auto h = particle_histogram(pts, 1, 0, ax);
    // 8 particles, width 0.25: counts {3, 1, 1, 1}, two outside.
    CHECK(h.values == std::vector<double>{1.5, 0.5, 0.5, 0.5});
    CHECK(h.mass() == doctest::Approx(0.75));

    const std::vector<double> two_d{0.1, 9.0, 0.8, -9.0};
    const auto h2 = particle_histogram(two_d, 2, 0, ax);
    CHECK(h2.values == std::vector<double>{2.0, 0.0, 0.0, 2.0});
    CHECK(l1_distance(h, h2) == doctest::Approx((0.5 + 0.5 + 0.5 + 1.5) * 0.25));
    CHECK_THROWS_AS(particle_histogram(two_d, 3, 0, ax), std::invalid_argument);
    CHECK_THROWS_AS(l1_distance(h, particle_histogram(pts, 1, 0, Axis{0.0, 1.0, 5})), std::invalid_argument);
}

TEST_CASE("solver rejects a field of the wrong kind") {
    PhaseGrid g;
    const auto obj = make_objective(ObjectiveKind::Ackley, 1);
    CHECK_THROWS_AS(MeanFieldSolver(Kind::MfPso, case1(), g, obj, initial_density(Kind::MfCbo, g, InitialLaw{})),
                    std::invalid_argument);
}
