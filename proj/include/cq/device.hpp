#pragma once

// Physical parameter model, unit conversion, Hamiltonian construction, and
// pulse-timing formulas for inductively coupled charge qubits.
//
// Unit conventions (used everywhere downstream):
//   - energies are frequencies E/h in GHz, times are in ns;
//     a segment of duration t under energy coefficient E accumulates
//     phase 2*pi*E*t, so U = exp(-2*pi*i*H*t);
//   - flux is the dimensionless ratio Phi_x/Phi_0; the Josephson term
//     vanishes exactly at flux = 1/2 ("switched off").

#include <string>
#include <vector>

#include "cq/qmath.hpp"

namespace cq {

inline constexpr double kKelvinToGhz = 20.836;  // k_B/h, 5 significant digits
inline constexpr double kUevToGhz = 0.2418;     // 1 ueV as E/h

enum class EnergyUnit { K, ueV, GHz };

double convert_energy(double value, EnergyUnit unit);
EnergyUnit energy_unit_from_name(const std::string& name);

enum class Coupling { inductor_yy, chi_xx };

struct DeviceParams {
    int n_qubits = 1;
    double E_C = 0.0;    // GHz
    double E_J0 = 0.0;   // GHz, single-junction Josephson energy
    double E_L = 0.0;    // GHz, inductor coupling scale
    double E_J_eff = 0.0;  // GHz, energy used for the reported tau (see timings)
    Coupling coupling_variant = Coupling::inductor_yy;
    std::vector<double> E_J0_per_qubit;  // optional non-identical override
};

// E_J0/E_C/E_L defaulted consistently: E_L = 2*sqrt(15)*E_J0 (the ratio the
// two-qubit gate requires), E_J_eff = E_J0.
DeviceParams make_device(int n_qubits, double E_C_ghz, double E_J0_ghz);

// Throws validation_error on nonpositive energies or bad qubit count.
void validate_device(const DeviceParams& p);

// Non-fatal regime warnings (charge regime expects E_C >> E_J0).
std::vector<std::string> device_warnings(const DeviceParams& p);

struct ControlSettings {
    std::vector<double> n_g;   // gate charge per qubit, dimensionless
    std::vector<double> flux;  // Phi_x/Phi_0 per qubit, interpreted mod 1
};

ControlSettings idle_settings(int n_qubits);  // all n_g = flux = 1/2 (H = 0)

struct Timings {
    double t_x = 0.0;          // ns, pi/2 x rotation at the degeneracy point
    double t_z_quarter = 0.0;  // ns, pi/2 z rotation at n_g = 0
    double t_y_total = 0.0;    // ns, z-x-z composite total
    double tau = 0.0;          // ns, reported two-qubit gate time (E_J_eff based)
};

double charge_energy(const DeviceParams& p, double n_g);       // 4 E_C (1 - 2 n_g)
double josephson_energy(const DeviceParams& p, double flux);   // 2 E_J0 cos(pi flux)
double josephson_energy_qubit(const DeviceParams& p, int qubit, double flux);
double interaction_energy(const DeviceParams& p, double flux1, double flux2);

// -(1/2) sum_l [dE_ch(n_g_l) sz_l + E_J(flux_l) sx_l]
//   - sum_{l<k} E_int(flux_l, flux_k) sy_l sy_k      (inductor_yy)
// with sx_l sx_k in place of sy_l sy_k for chi_xx.
ComplexMatrix hamiltonian(const DeviceParams& p, const ControlSettings& s);

// t_x = 1/(8 E_J0), t_z_quarter = 1/(16 E_C), t_y_total = 4 t_z_quarter + t_x,
// tau = sqrt(15)/(8 E_J_eff).
Timings timings(const DeviceParams& p);

// Duration that physically realizes the two-qubit gate: sqrt(15)/(8 E_J(0)).
// Differs from timings().tau by the documented factor-2 convention when
// E_J_eff = E_J0.
double tau_physical(const DeviceParams& p);

}  // namespace cq
