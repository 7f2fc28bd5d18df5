#include "ctfsyn/circuit/energy.hpp"

#include "ctfsyn/error.hpp"

#include <algorithm>
#include <cmath>

namespace ctfsyn::circuit {

double essential_write_energy(double v, double i_gate, double t_p, double area_ratio)
{
    if (!(t_p > 0.0) || !(area_ratio > 0.0))
        throw DomainError("essential energy needs t_p > 0 and area_ratio > 0");
    return std::abs(v) * std::abs(i_gate) / area_ratio * t_p;
}

EnergyReport write_energy(const CellTopology& topo, const CellModels& models, const waveform::Waveform& post,
                          double v_g, double dt_sample, const EssentialWrite& essential)
{
    if (!(dt_sample > 0.0))
        throw DomainError("dt_sample must be positive");
    EnergyReport rep;
    rep.topology = topo.name();
    DcSolution prev;
    bool have_prev = false;
    for (const auto& s : post.samples()) {
        if (s.v == 0.0)
            continue; // no bias, no current
        const auto sol = dc_solve(topo, models, s.v, v_g, have_prev ? &prev : nullptr);
        rep.e_parasitic += std::abs(s.v * sol.i_d) * dt_sample;
        rep.max_residual = std::max(rep.max_residual, sol.residual);
        prev = sol;
        have_prev = true;
    }
    rep.e_essential = essential_write_energy(essential.v, essential.i_gate, essential.t_p, essential.area_ratio);
    rep.e_total = rep.e_parasitic + rep.e_essential;
    return rep;
}

} // namespace ctfsyn::circuit
