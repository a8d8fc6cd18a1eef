#pragma once

// Quantum channels and single-qubit process tomography.

#include <cstdint>
#include <string>
#include <vector>

#include "cq/tomography.hpp"

namespace cq {

struct Channel {
    std::vector<ComplexMatrix> kraus_ops;  // common dim, sum K^dagger K = I
    std::string label;
};

// Throws validation_error unless sum K^dagger K = I within 1e-10.
void validate_channel(const Channel& c);

ComplexMatrix apply_channel(const Channel& c, const ComplexMatrix& rho);

enum class ChannelKind { identity, bit_flip, dephasing, amplitude_damping };

// Textbook Kraus sets; param is the flip/dephasing probability or the damping
// rate gamma, required in [0, 1] (ignored for identity).
Channel standard_channel(ChannelKind kind, double param = 0.0);
ChannelKind channel_kind_from_name(const std::string& name);

// The four tomography inputs |0>, |1>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2
// as density matrices, in that order.
std::vector<ComplexMatrix> input_states();

// Process matrix over the fixed operator basis (I, sx, sy, sz):
// E(rho) = sum_{mn} chi_mn sigma_m rho sigma_n.
struct ChiMatrix {
    Eigen::Matrix4cd entries;
    std::string basis_label = "I,x,y,z";
};

ComplexMatrix chi_apply(const ChiMatrix& chi, const ComplexMatrix& rho);

struct ProcessResult {
    ChiMatrix chi;
    std::vector<ReconstructionResult> input_reconstructions;  // one per input
    double tp_residual = 0.0;         // || sum chi_mn sigma_n sigma_m - I ||_max
    double min_chi_eigenvalue = 0.0;  // >= -tol for completely positive maps
};

// Runs schedule_1q state tomography on each channel output (exactly when
// shots = 0), then linearly inverts the four reconstructed outputs into chi.
// project selects whether each intermediate state is physicality-projected
// before inversion. Single-qubit channels only.
ProcessResult process_tomography(const DeviceParams& p, const Channel& c,
                                 long long shots, std::uint64_t master_seed,
                                 bool project = false);

}  // namespace cq
