#pragma once

#include <optional>
#include <string>

namespace ctfsyn::circuit {

inline constexpr double kThermalVoltage = 0.02585; // V at 300 K
inline constexpr double kExpClamp = 40.0;          // exponent beyond which e^x continues linearly

/// Shockley diode, optionally with an exponential reverse-breakdown branch.
struct DiodeModel {
    double i_s = 1e-15;
    double n_ideality = 1.0;
    std::optional<double> v_bv; // breakdown voltage (negative), Zener only
    double i_bv = 1e-9;         // current at v = v_bv, Zener only
    double r_series = 0.0;      // ohm; used for the bulk body-junction branch

    void validate() const;
};

DiodeModel standard_diode();
DiodeModel zener_diode();
DiodeModel body_diode();

struct DiodeEval {
    long double i;
    long double g; // dI/dV
};

/// Current with anode-to-cathode voltage v; the derivative is exact for the
/// clamped-exponential form, so Newton sees a consistent Jacobian.
DiodeEval diode_eval(const DiodeModel& d, long double v) noexcept;
double diode_current(const DiodeModel& d, double v) noexcept;

enum class MosfetMode { on_worst_case, vt_dependent };

MosfetMode parse_mosfet_mode(const std::string& name);

/// Linear-region flash transistor, I = K·V_ov·V_DS. In worst-case mode the
/// overdrive is fixed (channel fully on); otherwise it follows the gate
/// voltage and V_T through a softplus so the model stays smooth at cut-off.
struct MosfetModel {
    double k = 1e-4;              // A/V²
    double v_t = -0.3;            // V
    MosfetMode mode = MosfetMode::on_worst_case;
    double v_ov_on = 5.0;         // V, overdrive used in worst-case mode
    double softplus_width = 0.05; // V

    void validate() const;
};

struct MosfetEval {
    long double i;    // drain -> source
    long double g_ds; // dI/dV_ds at fixed drain voltage, i.e. -dI/dV_s
};

/// v_ds = v_d − v_s is passed explicitly so callers can keep it free of
/// cancellation when it is tiny compared to the node voltages.
MosfetEval mosfet_eval(const MosfetModel& m, long double v_g, long double v_d, long double v_ds) noexcept;

} // namespace ctfsyn::circuit
