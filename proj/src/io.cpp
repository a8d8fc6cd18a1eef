#include "cq/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "cq/errors.hpp"
#include "cq/tomography.hpp"

namespace cq {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0;
    size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size())
            throw validation_error("trailing characters");
        return v;
    } catch (const validation_error&) {
        throw validation_error("config value \"" + text + "\" for key \"" + key +
                               "\" is not a number");
    } catch (const std::exception&) {
        throw validation_error("config value \"" + text + "\" for key \"" + key +
                               "\" is not a number");
    }
}

long long parse_int(const std::string& key, const std::string& text) {
    try {
        size_t pos = 0;
        const long long v = std::stoll(text, &pos);
        if (pos != text.size())
            throw validation_error("trailing characters");
        return v;
    } catch (const validation_error&) {
        throw validation_error("config value \"" + text + "\" for key \"" + key +
                               "\" is not an integer");
    } catch (const std::exception&) {
        throw validation_error("config value \"" + text + "\" for key \"" + key +
                               "\" is not an integer");
    }
}

// Energy block <base>.value + <base>.unit in configured units, as GHz.
double energy_from_config(const Config& cfg, const std::string& base) {
    const double value = cfg.get_double(base + ".value");
    const EnergyUnit unit = energy_unit_from_name(cfg.get(base + ".unit"));
    return convert_energy(value, unit);
}

}  // namespace

std::string format_double(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex v) {
    double re = v.real();
    double im = v.imag();
    if (re == 0.0) re = 0.0;
    if (im == 0.0) im = 0.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", re, im);
    return buf;
}

bool Config::has(const std::string& key) const { return values.count(key) != 0; }

std::string Config::get(const std::string& key) const {
    const auto it = values.find(key);
    if (it == values.end())
        throw validation_error("missing config key \"" + key + "\"" +
                               (source_path.empty() ? "" : " in " + source_path));
    return it->second;
}

std::string Config::get_or(const std::string& key,
                           const std::string& fallback) const {
    const auto it = values.find(key);
    return it == values.end() ? fallback : it->second;
}

double Config::get_double(const std::string& key) const {
    return parse_double(key, get(key));
}

double Config::get_double_or(const std::string& key, double fallback) const {
    return has(key) ? get_double(key) : fallback;
}

long long Config::get_int_or(const std::string& key, long long fallback) const {
    return has(key) ? parse_int(key, get(key)) : fallback;
}

Config parse_config_file(const std::string& path) {
    Config cfg = parse_config_text(read_text_file(path));
    cfg.source_path = path;
    return cfg;
}

Config parse_config_text(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(line_no) +
                                   " has no '=': \"" + stripped + "\"");
        const std::string key = trim(stripped.substr(0, eq));
        if (key.empty())
            throw validation_error("config line " + std::to_string(line_no) +
                                   " has an empty key");
        cfg.values[key] = trim(stripped.substr(eq + 1));
    }
    return cfg;
}

DeviceParams device_from_config(const Config& cfg) {
    const int n = static_cast<int>(
        parse_int("device.n_qubits", cfg.get("device.n_qubits")));
    DeviceParams p = make_device(n, energy_from_config(cfg, "device.E_C"),
                                 energy_from_config(cfg, "device.E_J0"));
    if (cfg.has("device.E_L.value")) p.E_L = energy_from_config(cfg, "device.E_L");
    if (cfg.has("device.E_J_eff.value"))
        p.E_J_eff = energy_from_config(cfg, "device.E_J_eff");
    const std::string coupling = cfg.get_or("device.coupling", "inductor_yy");
    if (coupling == "inductor_yy")
        p.coupling_variant = Coupling::inductor_yy;
    else if (coupling == "chi_xx")
        p.coupling_variant = Coupling::chi_xx;
    else
        throw validation_error("unknown coupling \"" + coupling + "\"");
    for (int q = 1; q <= n; ++q) {
        const std::string base = "device.E_J0_q" + std::to_string(q);
        if (!cfg.has(base + ".value")) continue;
        if (p.E_J0_per_qubit.empty())
            p.E_J0_per_qubit.assign(static_cast<size_t>(n), p.E_J0);
        p.E_J0_per_qubit[static_cast<size_t>(q - 1)] =
            energy_from_config(cfg, base);
    }
    validate_device(p);
    return p;
}

std::string matrix_to_json(const ComplexMatrix& m) {
    nlohmann::ordered_json j;
    j["dim"] = m.rows();
    nlohmann::ordered_json re = nlohmann::ordered_json::array();
    nlohmann::ordered_json im = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re.push_back(m(i, k).real());
            im.push_back(m(i, k).imag());
        }
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
    return j.dump();
}

ComplexMatrix matrix_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad matrix JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") ||
        !j.contains("im"))
        throw validation_error("matrix JSON needs keys dim, re, im");
    Eigen::Index dim = 0;
    try {
        dim = j.at("dim").get<Eigen::Index>();
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad matrix JSON: ") + e.what());
    }
    if (dim < 1)
        throw validation_error("matrix JSON dim must be positive");
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    const size_t expected = static_cast<size_t>(dim) * static_cast<size_t>(dim);
    if (!re.is_array() || !im.is_array() || re.size() != expected ||
        im.size() != expected)
        throw validation_error("matrix JSON re/im must hold dim^2 numbers");
    ComplexMatrix m(dim, dim);
    try {
        size_t idx = 0;
        for (Eigen::Index i = 0; i < dim; ++i) {
            for (Eigen::Index k = 0; k < dim; ++k, ++idx) {
                m(i, k) = Complex(re.at(idx).get<double>(),
                                  im.at(idx).get<double>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw validation_error(std::string("bad matrix JSON: ") + e.what());
    }
    return m;
}

void write_matrix_json(const std::string& path, const ComplexMatrix& m) {
    write_text_file(path, matrix_to_json(m) + "\n");
}

ComplexMatrix read_matrix_json(const std::string& path) {
    return matrix_from_json_text(read_text_file(path));
}

std::string barchart_csv(const ComplexMatrix& m) {
    std::string out = "i,j,re,im\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            out += std::to_string(i) + "," + std::to_string(j) + "," +
                   format_double(m(i, j).real()) + "," +
                   format_double(m(i, j).imag()) + "\n";
        }
    }
    return out;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good())
        throw validation_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    const std::filesystem::path parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out.good())
        throw validation_error("cannot write file: " + path);
    out << content;
    if (!out.good())
        throw validation_error("write failed: " + path);
}

ComplexMatrix preset_state(const std::string& name) {
    const double s3 = std::sqrt(3.0);
    if (name == "fig3") {
        ComplexMatrix rho(2, 2);
        rho << Complex(0.5, 0.0), Complex(0.25, -s3 / 4.0),
            Complex(0.25, s3 / 4.0), Complex(0.5, 0.0);
        return rho;
    }
    if (name == "fig4") {
        ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
        rho(0, 0) = rho(3, 3) = 0.5;
        rho(0, 3) = Complex(0.5, -s3 / 2.0);
        rho(3, 0) = Complex(0.5, s3 / 2.0);
        return rho;
    }
    if (name.rfind("mixed", 0) == 0 && name.size() == 6 && name[5] >= '1' &&
        name[5] <= '4') {
        const int d = 1 << (name[5] - '0');
        return ComplexMatrix::Identity(d, d) / static_cast<double>(d);
    }
    throw validation_error("unknown state preset \"" + name + "\"");
}

ComplexMatrix state_from_config(const Config& cfg, int n_qubits) {
    const int sources = (cfg.has("state.preset") ? 1 : 0) +
                        (cfg.has("state.file") ? 1 : 0) +
                        (cfg.has("state.coefficients_file") ? 1 : 0);
    if (sources != 1)
        throw validation_error("state needs exactly one of state.preset, "
                               "state.file, state.coefficients_file");

    ComplexMatrix rho;
    if (cfg.has("state.preset")) {
        rho = preset_state(cfg.get("state.preset"));
    } else if (cfg.has("state.file")) {
        rho = read_matrix_json(cfg.get("state.file"));
    } else {
        const std::string path = cfg.get("state.coefficients_file");
        std::istringstream in(read_text_file(path));
        std::string line;
        if (!std::getline(in, line) || trim(line) != "word,value")
            throw validation_error("coefficient file " + path +
                                   " must start with \"word,value\"");
        std::vector<PauliString> coeffs;
        while (std::getline(in, line)) {
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto comma = stripped.find(',');
            if (comma == std::string::npos)
                throw validation_error("bad coefficient line \"" + stripped +
                                       "\" in " + path);
            coeffs.push_back(
                PauliString{word_from_name(trim(stripped.substr(0, comma))),
                            parse_double("coefficient",
                                         trim(stripped.substr(comma + 1)))});
        }
        rho = pauli_assemble(coeffs);
    }

    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    if (rho.rows() != dim)
        throw validation_error("state has dimension " +
                               std::to_string(rho.rows()) + ", device needs " +
                               std::to_string(dim));
    return rho;
}

Channel channel_from_config(const Config& cfg) {
    const ChannelKind kind = channel_kind_from_name(cfg.get("channel.kind"));
    return standard_channel(kind, cfg.get_double_or("channel.param", 0.0));
}

std::string coefficients_csv(const std::vector<PauliString>& coeffs) {
    std::string out = "word,value\n";
    for (const auto& c : coeffs)
        out += word_name(c.word) + "," + format_double(c.coefficient) + "\n";
    return out;
}

std::string records_csv(const std::vector<MeasurementRecord>& records) {
    std::string out = "label,readout_qubit,shots,ones,probability,seed\n";
    for (const auto& rec : records) {
        out += rec.setting.label + "," +
               std::to_string(rec.setting.readout_qubit + 1) + "," +
               std::to_string(rec.shots) + "," + std::to_string(rec.ones_count) +
               "," + format_double(rec.ideal_probability) + "," +
               std::to_string(rec.seed) + "\n";
    }
    return out;
}

}  // namespace cq
