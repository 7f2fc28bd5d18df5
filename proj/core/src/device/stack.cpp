#include "ctfsyn/device/stack.hpp"

#include "ctfsyn/error.hpp"

#include <cmath>
#include <string>

namespace ctfsyn::device {

void StackGeometry::validate() const
{
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!finite_pos(d_tox) || !finite_pos(d_ctl) || !finite_pos(d_box))
        throw DomainError("stack thicknesses must be positive");
    if (!(eps_tox >= 1.0) || !(eps_ctl >= 1.0) || !(eps_box >= 1.0))
        throw DomainError("relative permittivities must be >= 1");
    if (!finite_pos(area))
        throw DomainError("device area must be positive");
    if (!(charge_centroid >= 0.0 && charge_centroid <= 1.0))
        throw DomainError("charge centroid must lie in [0, 1]");
}

double StackGeometry::inv_cap_channel() const noexcept
{
    return (d_tox / eps_tox + charge_centroid * d_ctl / eps_ctl) / kEps0;
}

double StackGeometry::inv_cap_gate() const noexcept
{
    return ((1.0 - charge_centroid) * d_ctl / eps_ctl + d_box / eps_box) / kEps0;
}

void FnParams::validate() const
{
    for (double v : {a_tox, b_tox, a_box, b_box})
        if (!(std::isfinite(v) && v > 0.0))
            throw DomainError("FN constants must be finite and positive");
}

StackFields solve_stack_fields(const StackGeometry& geom, double v_g, double q_trap) noexcept
{
    const double inv_ch = geom.inv_cap_channel();
    const double inv_g = geom.inv_cap_gate();
    // Displacement in the tunnel oxide; crossing the sheet towards the gate
    // subtracts the sheet charge.
    const double d_tunnel = (v_g + q_trap * inv_g) / (inv_ch + inv_g);
    const double d_block = d_tunnel - q_trap;
    return {d_tunnel / (kEps0 * geom.eps_tox), d_block / (kEps0 * geom.eps_box)};
}

double fn_current_density(double e, double a, double b) noexcept
{
    if (e == 0.0)
        return 0.0;
    const double mag = std::abs(e);
    const double j = a * mag * mag * std::exp(-b / mag);
    return e > 0.0 ? j : -j;
}

} // namespace ctfsyn::device
