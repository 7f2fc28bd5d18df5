#include "ctfsyn/circuit/devices.hpp"

#include "ctfsyn/error.hpp"

#include <cmath>

namespace ctfsyn::circuit {

namespace {

struct ExpEval {
    long double f;
    long double df;
};

// e^x up to kExpClamp, then the tangent line, so overflow cannot occur.
ExpEval limexp(long double x) noexcept
{
    if (x <= kExpClamp) {
        const long double e = std::exp(x);
        return {e, e};
    }
    const long double e = std::exp(static_cast<long double>(kExpClamp));
    return {e * (1.0L + x - kExpClamp), e};
}

} // namespace

void DiodeModel::validate() const
{
    if (!(i_s > 0.0))
        throw DomainError("diode saturation current must be positive");
    if (!(n_ideality >= 1.0 && n_ideality <= 2.0))
        throw DomainError("diode ideality must lie in [1, 2]");
    if (v_bv && !(*v_bv < 0.0))
        throw DomainError("breakdown voltage must be negative");
    if (v_bv && !(i_bv > 0.0))
        throw DomainError("breakdown knee current must be positive");
    if (!(r_series >= 0.0))
        throw DomainError("series resistance must be >= 0");
}

DiodeModel standard_diode()
{
    return DiodeModel{1e-15, 1.0, std::nullopt, 0.0, 0.0};
}

DiodeModel zener_diode()
{
    return DiodeModel{1e-15, 1.0, -6.0, 1e-9, 0.0};
}

DiodeModel body_diode()
{
    return DiodeModel{1e-15, 1.0, std::nullopt, 0.0, 1e3};
}

DiodeEval diode_eval(const DiodeModel& d, long double v) noexcept
{
    const long double nvt = static_cast<long double>(d.n_ideality) * kThermalVoltage;
    const auto fwd = limexp(v / nvt);
    long double i = static_cast<long double>(d.i_s) * (fwd.f - 1.0L);
    long double g = static_cast<long double>(d.i_s) * fwd.df / nvt;
    if (d.v_bv) {
        const auto rev = limexp(-(v - static_cast<long double>(*d.v_bv)) / nvt);
        i -= static_cast<long double>(d.i_bv) * rev.f;
        g += static_cast<long double>(d.i_bv) * rev.df / nvt;
    }
    return {i, g};
}

double diode_current(const DiodeModel& d, double v) noexcept
{
    return static_cast<double>(diode_eval(d, v).i);
}

MosfetMode parse_mosfet_mode(const std::string& name)
{
    if (name == "on_worst_case")
        return MosfetMode::on_worst_case;
    if (name == "vt_dependent")
        return MosfetMode::vt_dependent;
    throw DomainError("unknown MOSFET mode '" + name + "'");
}

void MosfetModel::validate() const
{
    if (!(k > 0.0))
        throw DomainError("MOSFET k must be positive");
    if (!(v_ov_on > 0.0) || !(softplus_width > 0.0))
        throw DomainError("MOSFET overdrive and softplus width must be positive");
    if (!std::isfinite(v_t))
        throw DomainError("MOSFET V_T must be finite");
}

MosfetEval mosfet_eval(const MosfetModel& m, long double v_g, long double v_d, long double v_ds) noexcept
{
    const long double k = m.k;
    if (m.mode == MosfetMode::on_worst_case)
        return {k * m.v_ov_on * v_ds, k * m.v_ov_on};

    // Source is whichever terminal sits lower.
    const long double v_s = v_d - v_ds;
    const bool drain_low = v_ds < 0.0L;
    const long double v_low = drain_low ? v_d : v_s;
    const long double w = m.softplus_width;
    const long double x = (v_g - m.v_t - v_low) / w;
    const long double ov = x > 40.0L ? w * x : w * std::log1p(std::exp(x));
    const long double sig = 1.0L / (1.0L + std::exp(-x));
    // d(ov)/d(v_ds): only through v_s, and only when the source terminal is v_s.
    const long double dov = drain_low ? 0.0L : sig;
    return {k * ov * v_ds, k * (ov + v_ds * dov)};
}

} // namespace ctfsyn::circuit
