#pragma once

// Projective |1><1| readout on a single qubit, exact probabilities, and
// deterministic seeded shot sampling.

#include <cstdint>
#include <string>
#include <vector>

#include "cq/control.hpp"
#include "cq/device.hpp"
#include "cq/qmath.hpp"

namespace cq {

struct MeasurementSetting {
    PulseSequence sequence;
    int readout_qubit = 0;  // 0-based
    std::string label;      // unique key, e.g. "U(t)Z1:q1"
};

struct MeasurementRecord {
    MeasurementSetting setting;
    double ideal_probability = 0.0;
    long long shots = 0;
    long long ones_count = 0;
    std::uint64_t seed = 0;
};

// I x ... x |1><1| x ... x I with the projector at 0-based position l.
ComplexMatrix projector_one(int n, int l);

// Tr[W rho W^dagger (|1><1|)_l], clamped to [0, 1]. Values outside
// [-1e-10, 1 + 1e-10] indicate an unphysical state or a bug and throw
// physics_error.
double probability(const DeviceParams& p, const ComplexMatrix& rho,
                   const MeasurementSetting& s);

// Same, using a precomputed observable W^dagger (|1><1|)_l W.
double probability_from_observable(const ComplexMatrix& rho,
                                   const ComplexMatrix& observable);

// splitmix64 step: advances state by the golden-ratio increment and returns
// the mixed output. Matches the published reference outputs.
std::uint64_t splitmix64_next(std::uint64_t& state);

// Deterministic per-setting stream key.
std::uint64_t derive_seed(std::uint64_t master_seed, const std::string& label);

// Symmetric classical readout error: p' = p (1 - f) + (1 - p) f.
double flip_probability(double p, double f);

// Binomial draw as integer-threshold Bernoulli counting on splitmix64.
// Fully determined by (probability, shots, seed); platform independent.
long long sample(double probability, long long shots, std::uint64_t seed);

// Compose + conjugate once; returns W^dagger (|1><1|)_l W for reuse across
// many states.
ComplexMatrix setting_observable(const DeviceParams& p, const MeasurementSetting& s);

}  // namespace cq
