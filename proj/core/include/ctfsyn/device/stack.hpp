#pragma once

namespace ctfsyn::device {

inline constexpr double kEps0 = 8.8541878128e-12;          // F/m
inline constexpr double kElectronCharge = 1.602176634e-19; // C

/// Tunnel oxide / nitride trap layer / blocking oxide. Thicknesses in metres,
/// permittivities relative, area in m². The stored charge is a sheet located
/// at `charge_centroid * d_ctl` measured from the tunnel-oxide interface.
struct StackGeometry {
    double d_tox = 4e-9;
    double d_ctl = 6e-9;
    double d_box = 12e-9;
    double eps_tox = 3.9;
    double eps_ctl = 7.5;
    double eps_box = 9.0;
    double area = 1e-8;
    double charge_centroid = 0.9201608829126473;

    void validate() const;

    /// Inverse capacitance per area (V·m²/C) between gate and charge sheet.
    double inv_cap_gate() const noexcept;
    /// Inverse capacitance per area between charge sheet and channel.
    double inv_cap_channel() const noexcept;
};

/// Fowler-Nordheim constants: J = a·E²·exp(-b/|E|), a in A/V², b in V/m.
struct FnParams {
    double a_tox = 7.752908798887941e-18;
    double b_tox = 9042595519.578053;
    double a_box = 1.3766952031529631e-17;
    double b_box = 5981349800.275214;

    void validate() const;
};

struct StackFields {
    double e_tox; // V/m, positive points from gate towards channel
    double e_box;
};

/// Series-capacitor solution with a charge sheet; the sum of the three layer
/// voltage drops equals v_g (flat-band offset is zero).
StackFields solve_stack_fields(const StackGeometry& geom, double v_g, double q_trap) noexcept;

/// Signed FN current density. Odd in e and zero at e = 0.
double fn_current_density(double e, double a, double b) noexcept;

} // namespace ctfsyn::device
