#pragma once

#include "ctfsyn/circuit/devices.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctfsyn::circuit {

enum class Substrate { bulk, soi };

struct CellTopology {
    bool has_2d = true;
    Substrate substrate = Substrate::soi;

    std::string name() const; // "1F2D-soi", "1F0D-bulk", ...
    static CellTopology parse(const std::string& name);
};

/// All four combinations in a fixed order: 1F0D-bulk, 1F0D-soi, 1F2D-bulk, 1F2D-soi.
std::vector<CellTopology> all_topologies();

/// Compact models of one synapse cell. The 2D subcircuit hangs off the flash
/// source node S': standard diode with anode M and cathode S', Zener with
/// anode M and cathode at ground. Bulk cells add a drain-to-substrate
/// junction (anode at the drain) with an ohmic series resistance.
struct CellModels {
    MosfetModel flash{};
    DiodeModel sd = standard_diode();
    DiodeModel zd = zener_diode();
    DiodeModel body = body_diode();

    void validate() const;
};

struct DcSolution {
    double v_d = 0.0, v_g = 0.0;
    double v_s = 0.0;      // flash source node S'
    double v_m = 0.0;      // midpoint between the diodes
    double i_d = 0.0;      // total current drawn from the drain terminal
    double i_flash = 0.0;  // drain -> S'
    double i_series = 0.0; // through the 2D stack towards ground (equals i_zd)
    double i_body = 0.0;
    double residual = 0.0; // max KCL violation, A
    int iterations = 0;

    // Continuation state: branch voltages the solver iterates on.
    long double x_flash = 0.0L;
    long double x_zener = 0.0L;
};

struct SolverOptions {
    int max_iterations = 200;
    int max_halvings = 60;
    double rel_tol = 1e-15;
    double current_floor = 1e-12; // A
};

/// Damped Newton on the KCL equations of the cell, in extended precision.
/// `guess` (a previous solution) provides continuation along sweeps.
DcSolution dc_solve(const CellTopology& topo, const CellModels& models, double v_d, double v_g,
                    const DcSolution* guess = nullptr, const SolverOptions& opts = {});

struct IvPoint {
    double v_d;
    double i_d;
    int iterations;
    double residual;
};

/// Continuation-ordered sweep from v_from towards v_to in steps of |step|.
std::vector<IvPoint> iv_sweep(const CellTopology& topo, const CellModels& models, double v_from, double v_to,
                              double step, double v_g, const SolverOptions& opts = {});

struct TwoDiodeSolution {
    double i;        // current entering the subcircuit at S'
    double v_m;
    double residual;
};

/// The back-to-back diode pair alone, driven at S' against ground.
TwoDiodeSolution two_diode_current(const CellModels& models, double v, const SolverOptions& opts = {});

} // namespace ctfsyn::circuit
