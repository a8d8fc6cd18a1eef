#include "cq/device.hpp"

#include <cmath>

namespace cq {

namespace {

// cos(pi*f) via sin(pi*(1/2 - f)) so the junction switches off to exactly
// zero at half-flux and stays exactly 2*E_J0 at zero flux.
double cos_pi(double f) { return std::sin(M_PI * (0.5 - f)); }

}  // namespace

double convert_energy(double value, EnergyUnit unit) {
    switch (unit) {
        case EnergyUnit::K: return value * kKelvinToGhz;
        case EnergyUnit::ueV: return value * kUevToGhz;
        case EnergyUnit::GHz: return value;
    }
    throw validation_error("unknown energy unit");
}

EnergyUnit energy_unit_from_name(const std::string& name) {
    if (name == "K") return EnergyUnit::K;
    if (name == "ueV" || name == "uev") return EnergyUnit::ueV;
    if (name == "GHz" || name == "ghz") return EnergyUnit::GHz;
    throw validation_error("unknown energy unit '" + name +
                           "' (expected K, ueV, or GHz)");
}

DeviceParams make_device(int n_qubits, double E_C_ghz, double E_J0_ghz) {
    DeviceParams p;
    p.n_qubits = n_qubits;
    p.E_C = E_C_ghz;
    p.E_J0 = E_J0_ghz;
    p.E_L = 2.0 * std::sqrt(15.0) * E_J0_ghz;
    p.E_J_eff = E_J0_ghz;
    validate_device(p);
    return p;
}

void validate_device(const DeviceParams& p) {
    if (p.n_qubits < 1 || p.n_qubits > 4)
        throw validation_error("n_qubits " + std::to_string(p.n_qubits) +
                               " outside [1, 4]");
    if (p.E_C <= 0.0 || p.E_J0 <= 0.0 || p.E_L <= 0.0 || p.E_J_eff <= 0.0)
        throw validation_error("device energies must be positive");
    if (!p.E_J0_per_qubit.empty() &&
        p.E_J0_per_qubit.size() != static_cast<size_t>(p.n_qubits))
        throw validation_error("per-qubit E_J0 override must list every qubit");
    for (double e : p.E_J0_per_qubit)
        if (e <= 0.0)
            throw validation_error("per-qubit E_J0 values must be positive");
}

std::vector<std::string> device_warnings(const DeviceParams& p) {
    std::vector<std::string> warnings;
    if (p.E_C < 5.0 * p.E_J0)
        warnings.push_back(
            "charge regime expects E_C >> E_J0; two-level truncation is "
            "questionable at E_C/E_J0 = " +
            std::to_string(p.E_C / p.E_J0));
    const double ratio = p.E_L / josephson_energy(p, 0.0);
    if (std::abs(ratio - std::sqrt(15.0)) > 1e-6)
        warnings.push_back(
            "E_L / E_J(0) = " + std::to_string(ratio) +
            " != sqrt(15); the special-time two-qubit gate is unavailable");
    return warnings;
}

ControlSettings idle_settings(int n_qubits) {
    ControlSettings s;
    s.n_g.assign(static_cast<size_t>(n_qubits), 0.5);
    s.flux.assign(static_cast<size_t>(n_qubits), 0.5);
    return s;
}

double charge_energy(const DeviceParams& p, double n_g) {
    return 4.0 * p.E_C * (1.0 - 2.0 * n_g);
}

double josephson_energy(const DeviceParams& p, double flux) {
    return 2.0 * p.E_J0 * cos_pi(flux);
}

double josephson_energy_qubit(const DeviceParams& p, int qubit, double flux) {
    if (qubit < 0 || qubit >= p.n_qubits)
        throw validation_error("qubit index out of range");
    const double base = p.E_J0_per_qubit.empty()
                            ? p.E_J0
                            : p.E_J0_per_qubit[static_cast<size_t>(qubit)];
    return 2.0 * base * cos_pi(flux);
}

double interaction_energy(const DeviceParams& p, double flux1, double flux2) {
    return josephson_energy(p, flux1) * josephson_energy(p, flux2) / p.E_L;
}

ComplexMatrix hamiltonian(const DeviceParams& p, const ControlSettings& s) {
    validate_device(p);
    const size_t n = static_cast<size_t>(p.n_qubits);
    if (s.n_g.size() != n || s.flux.size() != n)
        throw validation_error("control settings must cover every qubit");

    const Eigen::Index dim = Eigen::Index(1) << p.n_qubits;
    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);

    auto embed = [&](const std::vector<int>& word) { return pauli_matrix(word); };

    for (int l = 0; l < p.n_qubits; ++l) {
        std::vector<int> wz(n, 0), wx(n, 0);
        wz[static_cast<size_t>(l)] = 3;
        wx[static_cast<size_t>(l)] = 1;
        const double ez = charge_energy(p, s.n_g[static_cast<size_t>(l)]);
        const double ex =
            josephson_energy_qubit(p, l, s.flux[static_cast<size_t>(l)]);
        if (ez != 0.0) h -= 0.5 * ez * embed(wz);
        if (ex != 0.0) h -= 0.5 * ex * embed(wx);
    }

    const int axis = p.coupling_variant == Coupling::inductor_yy ? 2 : 1;
    for (int l = 0; l < p.n_qubits; ++l) {
        for (int k = l + 1; k < p.n_qubits; ++k) {
            const double e_int =
                josephson_energy_qubit(p, l, s.flux[static_cast<size_t>(l)]) *
                josephson_energy_qubit(p, k, s.flux[static_cast<size_t>(k)]) /
                p.E_L;
            if (e_int == 0.0) continue;
            std::vector<int> w(n, 0);
            w[static_cast<size_t>(l)] = axis;
            w[static_cast<size_t>(k)] = axis;
            h -= e_int * embed(w);
        }
    }
    return h;
}

Timings timings(const DeviceParams& p) {
    validate_device(p);
    Timings t;
    t.t_x = 1.0 / (8.0 * p.E_J0);
    t.t_z_quarter = 1.0 / (16.0 * p.E_C);
    t.t_y_total = 4.0 * t.t_z_quarter + t.t_x;
    t.tau = std::sqrt(15.0) / (8.0 * p.E_J_eff);
    return t;
}

double tau_physical(const DeviceParams& p) {
    return std::sqrt(15.0) / (8.0 * josephson_energy(p, 0.0));
}

}  // namespace cq
