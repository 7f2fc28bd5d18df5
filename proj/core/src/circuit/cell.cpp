#include "ctfsyn/circuit/cell.hpp"

#include "ctfsyn/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace ctfsyn::circuit {

using ld = long double;

std::string CellTopology::name() const
{
    return fmt::format("{}-{}", has_2d ? "1F2D" : "1F0D", substrate == Substrate::soi ? "soi" : "bulk");
}

CellTopology CellTopology::parse(const std::string& name)
{
    for (const auto& t : all_topologies())
        if (t.name() == name)
            return t;
    throw DomainError("unknown topology '" + name + "' (expected 1F0D-bulk, 1F0D-soi, 1F2D-bulk or 1F2D-soi)");
}

std::vector<CellTopology> all_topologies()
{
    return {{false, Substrate::bulk}, {false, Substrate::soi}, {true, Substrate::bulk}, {true, Substrate::soi}};
}

void CellModels::validate() const
{
    flash.validate();
    sd.validate();
    zd.validate();
    body.validate();
    if (sd.v_bv)
        throw DomainError("the standard diode has no breakdown branch");
    if (!zd.v_bv)
        throw DomainError("the Zener diode needs a breakdown voltage");
}

namespace {

struct BodyResult {
    ld i;
    ld residual;
    int iterations;
};

// Junction in series with a resistor, drain to ground. The unknown is the
// resistor drop, which stays well resolved when the junction blocks.
BodyResult solve_body(const DiodeModel& body, ld v_d, const SolverOptions& opts)
{
    if (body.r_series == 0.0)
        return {diode_eval(body, v_d).i, 0.0L, 0};
    const ld r = body.r_series;
    auto eval = [&](ld x) {
        const auto d = diode_eval(body, v_d - x);
        return std::pair<ld, ld>{x / r - d.i, 1.0L / r + d.g};
    };
    ld x = 0.0L;
    auto [f, df] = eval(x);
    int it = 0;
    for (; it < opts.max_iterations; ++it) {
        const ld i_ref = std::max(std::abs(x / r), static_cast<ld>(opts.current_floor));
        if (std::abs(f) <= static_cast<ld>(opts.rel_tol) * i_ref)
            return {x / r, std::abs(f), it};
        ld step = -f / df;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            const auto [f_new, df_new] = eval(x + step);
            if (std::abs(f_new) < std::abs(f)) {
                x += step;
                f = f_new;
                df = df_new;
                accepted = true;
                break;
            }
            step *= 0.5L;
        }
        if (!accepted)
            break;
    }
    const ld i_ref = std::max(std::abs(x / r), static_cast<ld>(opts.current_floor));
    if (std::abs(f) <= static_cast<ld>(opts.rel_tol) * i_ref)
        return {x / r, std::abs(f), it};
    throw NumericError(fmt::format("body-junction solve did not converge at v_d={} V", static_cast<double>(v_d)),
                       static_cast<double>(std::abs(f)));
}

struct StackEval {
    ld r1, r2;           // KCL at S' and at M
    ld i_f, i_sd, i_zd;  // branch currents
    ld j11, j12, j21, j22;
};

// Unknowns: x = flash drop v_d - v_s, z = Zener voltage v_m. The SD voltage
// v_m - v_s follows from Kirchhoff's voltage law.
StackEval eval_stack(const CellModels& m, ld v_d, ld v_g, ld x, ld z)
{
    const auto f = mosfet_eval(m.flash, v_g, v_d, x);
    const auto sd = diode_eval(m.sd, z - v_d + x);
    const auto zd = diode_eval(m.zd, z);
    StackEval e{};
    e.i_f = f.i;
    e.i_sd = sd.i;
    e.i_zd = zd.i;
    e.r1 = f.i + sd.i;
    e.r2 = sd.i + zd.i;
    e.j11 = f.g_ds + sd.g;
    e.j12 = sd.g;
    e.j21 = sd.g;
    e.j22 = sd.g + zd.g;
    return e;
}

ld merit(const StackEval& e)
{
    return e.r1 * e.r1 + e.r2 * e.r2;
}

ld stack_tolerance(const StackEval& e, const SolverOptions& opts)
{
    const ld scale = std::max({std::abs(e.i_f), std::abs(e.i_sd), std::abs(e.i_zd), static_cast<ld>(opts.current_floor)});
    return static_cast<ld>(opts.rel_tol) * scale;
}

void initial_guess(const CellModels& m, ld v_d, ld& x, ld& z)
{
    if (v_d >= 0.0L) {
        x = 0.0L;
        z = 0.0L;
        return;
    }
    const ld v_bv = static_cast<ld>(*m.zd.v_bv);
    if (v_d > v_bv) {
        x = 0.0L;
        z = v_d;
        return;
    }
    z = v_bv - 0.1L;
    const ld v_sd = 0.6L;
    x = v_sd - z + v_d;
}

} // namespace

DcSolution dc_solve(const CellTopology& topo, const CellModels& models, double v_d, double v_g,
                    const DcSolution* guess, const SolverOptions& opts)
{
    models.validate();
    if (!std::isfinite(v_d) || !std::isfinite(v_g))
        throw DomainError("bias voltages must be finite");

    DcSolution sol;
    sol.v_d = v_d;
    sol.v_g = v_g;
    ld residual = 0.0L;
    int iterations = 0;

    if (topo.substrate == Substrate::bulk) {
        const auto b = solve_body(models.body, v_d, opts);
        sol.i_body = static_cast<double>(b.i);
        residual = std::max(residual, b.residual);
        iterations = std::max(iterations, b.iterations);
    }

    if (!topo.has_2d) {
        const auto f = mosfet_eval(models.flash, v_g, v_d, v_d);
        sol.i_flash = static_cast<double>(f.i);
        sol.i_series = sol.i_flash;
        sol.x_flash = v_d;
    } else {
        ld x = 0.0L, z = 0.0L;
        if (guess) {
            x = guess->x_flash;
            z = guess->x_zener;
        } else {
            initial_guess(models, v_d, x, z);
        }
        auto e = eval_stack(models, v_d, v_g, x, z);
        int it = 0;
        bool converged = false;
        for (; it <= opts.max_iterations; ++it) {
            if (std::abs(e.r1) <= stack_tolerance(e, opts) && std::abs(e.r2) <= stack_tolerance(e, opts)) {
                converged = true;
                break;
            }
            if (it == opts.max_iterations)
                break;
            const ld det = e.j11 * e.j22 - e.j12 * e.j21;
            if (!(std::abs(det) > 0.0L) || !std::isfinite(det))
                break;
            ld dx = -(e.j22 * e.r1 - e.j12 * e.r2) / det;
            ld dz = -(-e.j21 * e.r1 + e.j11 * e.r2) / det;
            const ld m0 = merit(e);
            bool accepted = false;
            for (int h = 0; h <= opts.max_halvings; ++h) {
                const auto trial = eval_stack(models, v_d, v_g, x + dx, z + dz);
                if (merit(trial) < m0) {
                    x += dx;
                    z += dz;
                    e = trial;
                    accepted = true;
                    break;
                }
                dx *= 0.5L;
                dz *= 0.5L;
            }
            if (!accepted)
                break;
        }
        const ld res = std::max(std::abs(e.r1), std::abs(e.r2));
        if (!converged)
            throw NumericError(fmt::format("{} DC solve did not converge at v_d={} V after {} iterations "
                                           "(residual {:.3g} A)",
                                           topo.name(), v_d, it, static_cast<double>(res)),
                               static_cast<double>(res));
        residual = std::max(residual, res);
        iterations = std::max(iterations, it);
        sol.x_flash = x;
        sol.x_zener = z;
        sol.v_s = static_cast<double>(static_cast<ld>(v_d) - x);
        sol.v_m = static_cast<double>(z);
        sol.i_flash = static_cast<double>(e.i_f);
        sol.i_series = static_cast<double>(e.i_zd);
    }

    sol.i_d = sol.i_flash + sol.i_body;
    sol.residual = static_cast<double>(residual);
    sol.iterations = iterations;
    return sol;
}

std::vector<IvPoint> iv_sweep(const CellTopology& topo, const CellModels& models, double v_from, double v_to,
                              double step, double v_g, const SolverOptions& opts)
{
    if (!(std::abs(step) > 0.0))
        throw DomainError("sweep step must be non-zero");
    const double span = v_to - v_from;
    const auto n = static_cast<long long>(std::floor(std::abs(span) / std::abs(step) + 1e-9));
    const double signed_step = span >= 0.0 ? std::abs(step) : -std::abs(step);
    std::vector<IvPoint> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    DcSolution prev;
    for (long long k = 0; k <= n; ++k) {
        // Index-based grid so no rounding drift accumulates along the sweep.
        const double v = v_from + static_cast<double>(k) * signed_step;
        const auto sol = dc_solve(topo, models, v, v_g, k == 0 ? nullptr : &prev, opts);
        out.push_back({v, sol.i_d, sol.iterations, sol.residual});
        prev = sol;
    }
    return out;
}

TwoDiodeSolution two_diode_current(const CellModels& models, double v, const SolverOptions& opts)
{
    models.validate();
    // Unknown: v_m. KCL at M: I_sd(v_m - v) + I_zd(v_m) = 0, monotone in v_m.
    auto eval = [&](ld z) {
        const auto sd = diode_eval(models.sd, z - static_cast<ld>(v));
        const auto zd = diode_eval(models.zd, z);
        return std::tuple<ld, ld, ld>{sd.i + zd.i, sd.g + zd.g, sd.i};
    };
    ld z = v >= 0.0 ? 0.0L : std::max(static_cast<ld>(v), static_cast<ld>(*models.zd.v_bv) - 0.1L);
    auto [f, df, isd] = eval(z);
    for (int it = 0; it < opts.max_iterations; ++it) {
        const ld tol = static_cast<ld>(opts.rel_tol) *
                       std::max(std::abs(isd), static_cast<ld>(opts.current_floor));
        if (std::abs(f) <= tol)
            return {static_cast<double>(-isd), static_cast<double>(z), static_cast<double>(std::abs(f))};
        ld step = -f / df;
        bool accepted = false;
        for (int h = 0; h <= opts.max_halvings; ++h) {
            auto [f2, df2, isd2] = eval(z + step);
            if (std::abs(f2) < std::abs(f)) {
                z += step;
                f = f2;
                df = df2;
                isd = isd2;
                accepted = true;
                break;
            }
            step *= 0.5L;
        }
        if (!accepted)
            break;
    }
    throw NumericError(fmt::format("diode-pair solve did not converge at v={} V", v), static_cast<double>(std::abs(f)));
}

} // namespace ctfsyn::circuit
