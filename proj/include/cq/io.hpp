#pragma once

// Config ingestion and bit-stable serialization. Output files are pure
// functions of their inputs: fixed key order, fixed float format, newline
// endings, no timestamps.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cq/device.hpp"
#include "cq/process.hpp"

namespace cq {

// %.17g rendering; round-trips doubles exactly.
std::string format_double(double v);
std::string format_complex(Complex v);

// Flat "dotted.key = value" lines; '#' starts a comment; blank lines ignored.
struct Config {
    std::map<std::string, std::string> values;
    std::string source_path;

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;  // throws if missing
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    long long get_int_or(const std::string& key, long long fallback) const;
};

Config parse_config_file(const std::string& path);
Config parse_config_text(const std::string& text);  // for tests

// Device block: device.n_qubits, device.E_C.value/.unit, device.E_J0.value/
// .unit, optional device.E_L.*, device.E_J_eff.*, device.coupling,
// device.E_J0_q<k>.value/.unit per-qubit overrides.
DeviceParams device_from_config(const Config& cfg);

// Complex matrix file: {"dim": d, "re": [...], "im": [...]}, row-major.
std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json_text(const std::string& text);
void write_matrix_json(const std::string& path, const ComplexMatrix& m);
ComplexMatrix read_matrix_json(const std::string& path);

// Bar-chart data: header "i,j,re,im", one row per matrix element.
std::string barchart_csv(const ComplexMatrix& m);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// State specification: named preset, explicit matrix file, or coefficient
// file (word,r lines). Presets: "fig3" (the worked single-qubit example),
// "mixed1/2/3" (maximally mixed), "fig4" (the unphysical two-qubit example
// used to exercise projection).
ComplexMatrix state_from_config(const Config& cfg, int n_qubits);
ComplexMatrix preset_state(const std::string& name);

Channel channel_from_config(const Config& cfg);

std::string coefficients_csv(const std::vector<PauliString>& coeffs);
std::string records_csv(const std::vector<MeasurementRecord>& records);

}  // namespace cq
