#pragma once

#include "ctfsyn/circuit/cell.hpp"
#include "ctfsyn/waveform/waveform.hpp"

namespace ctfsyn::circuit {

/// E = |v|·|i_gate|·t_p / area_ratio: the tunnelling energy of a large test
/// device rescaled to a smaller cell by the area ratio.
double essential_write_energy(double v, double i_gate, double t_p, double area_ratio);

struct EssentialWrite {
    double v = 14.5;
    double i_gate = 2.34e-9;
    double t_p = 20e-3;
    double area_ratio = 1e6;
};

struct EnergyReport {
    std::string topology;
    double e_parasitic = 0.0;
    double e_essential = 0.0;
    double e_total = 0.0;
    double max_residual = 0.0;
};

/// Quasi-static: every drain sample is an independent DC point held for
/// dt_sample, E_parasitic = Σ |v_d·i_d|·dt_sample.
EnergyReport write_energy(const CellTopology& topo, const CellModels& models, const waveform::Waveform& post,
                          double v_g, double dt_sample, const EssentialWrite& essential);

} // namespace ctfsyn::circuit
