#pragma once

// Measurement-schedule generation, triangular coefficient solving, density
// matrix assembly, and physicality projection for 1..4 qubit states.

#include <cstdint>
#include <vector>

#include "cq/measurement.hpp"

namespace cq {

// One linear relation p = 1/2 + sum_w terms[w].coefficient * r_w. The target
// word is the single unknown the relation resolves; every other word with a
// nonzero coefficient must be resolved by an earlier relation.
struct Relation {
    std::vector<int> target;
    std::vector<PauliString> terms;
};

struct TomographySchedule {
    int n_qubits = 0;
    std::vector<MeasurementSetting> settings;
    std::vector<Relation> plan;  // plan[i] belongs to settings[i]
};

// Three settings: empty sequence (r_z via p = (1 - r_z)/2), X1 (r_y via
// p = (1 + r_y)/2), and the z-x-z composite (r_x via p = (1 + r_x)/2).
TomographySchedule schedule_1q(const DeviceParams& p);

// Fifteen settings: six single-qubit (z, y, x per qubit, partner parked) plus
// the nine rows of the chosen readout table.
TomographySchedule schedule_2q(const DeviceParams& p, Route route);

// Greedy generic schedule over the gate alphabet {X_l, Z_l, U_lk}: candidate
// operation strings are enumerated deterministically by (length, lex) up to
// max_gates, and a candidate is accepted when its relation introduces exactly
// one unresolved word. Throws physics_error listing unresolved words if the
// budget is exhausted first. Every accepted relation is cross-checked against
// the physically composed unitary.
TomographySchedule schedule_nq(const DeviceParams& p, int n, int max_gates = 4);

// Settings resolving one three-qubit word together with its prerequisites.
// The word (x, z, y) uses the hand-built chain ending in W = U13(t)Z1U12(t)
// read out on qubit 1; other words fall back to the generic generator.
TomographySchedule schedule_3q_coefficient(const DeviceParams& p,
                                           const std::vector<int>& target);

// Structural acyclicity/triangularity check; throws physics_error on failure.
void check_triangular(const TomographySchedule& schedule);

// Resolve every coefficient in plan order. Uses empirical frequencies when a
// record has shots > 0, ideal probabilities otherwise. Returns the full 4^n
// coefficient list in lexicographic order with r_{0...0} = 1.
std::vector<PauliString> solve(const TomographySchedule& schedule,
                               const std::vector<MeasurementRecord>& records);

// (1/2^n) sum r_w P_w over a complete coefficient set.
ComplexMatrix assemble(const std::vector<PauliString>& coefficients);

// Nearest (Frobenius) PSD trace-one matrix sharing raw's eigenvectors:
// eigenvalues are projected onto the probability simplex (sorted
// water-filling). Idempotent on physical inputs.
ComplexMatrix project_physical(const ComplexMatrix& raw);

struct ReconstructionResult {
    ComplexMatrix raw_rho;
    ComplexMatrix physical_rho;
    std::vector<PauliString> coefficients;
    double min_eigenvalue_raw = 0.0;
    // Per-setting gap between empirical frequency and ideal probability
    // (zero in exact mode).
    std::vector<double> residuals;
};

// Simulate every setting against rho. shots = 0 records exact probabilities;
// otherwise per-setting seeds derive from (master_seed, setting label) and the
// optional symmetric readout flip rate applies.
std::vector<MeasurementRecord> run_schedule(const DeviceParams& p,
                                            const TomographySchedule& schedule,
                                            const ComplexMatrix& rho,
                                            long long shots,
                                            std::uint64_t master_seed,
                                            double readout_flip = 0.0);

ReconstructionResult reconstruct(const DeviceParams& p,
                                 const TomographySchedule& schedule,
                                 const std::vector<MeasurementRecord>& records);

}  // namespace cq
