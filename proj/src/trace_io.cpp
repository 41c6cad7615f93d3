#include "epr/trace_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace epr {

namespace {

constexpr char kDumpMagic[8] = {'E', 'P', 'R', 'M', 'C', '0', '0', '1'};

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", value);
    return buf;
}

}  // namespace

std::string trace_csv(const SpectrumTrace& trace) {
    std::string out = "frequency_hz,power_db,rbw_hz,vbw_hz,n_averages,normalized\n";
    for (std::size_t i = 0; i < trace.frequency_hz.size(); ++i) {
        out += fmt(trace.frequency_hz[i]);
        out += ',';
        out += fmt(trace.power_db[i]);
        out += ',';
        out += fmt(trace.rbw_hz);
        out += ',';
        out += fmt(trace.vbw_hz);
        out += ',';
        out += std::to_string(trace.n_averages);
        out += ',';
        out += trace.normalized ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string epr_csv(const std::vector<FrequencyEpr>& points) {
    std::string out = "frequency_hz,delta_epr,var_x_minus,var_p_plus,entangled\n";
    for (const auto& p : points) {
        out += fmt(p.frequency_hz);
        out += ',';
        out += fmt(p.epr.delta_epr);
        out += ',';
        out += fmt(p.epr.var_x_minus);
        out += ',';
        out += fmt(p.epr.var_p_plus);
        out += ',';
        out += p.epr.entangled ? '1' : '0';
        out += '\n';
    }
    return out;
}

std::string pm_curve_csv(const PmCurve& curve) {
    std::string out = "signal_wavelength_m,efficiency\n";
    for (std::size_t i = 0; i < curve.signal_wavelengths_m.size(); ++i) {
        out += fmt(curve.signal_wavelengths_m[i]);
        out += ',';
        out += fmt(curve.efficiency[i]);
        out += '\n';
    }
    return out;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw NumericalError("cannot write file: " + tmp.string());
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw NumericalError("short write: " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_sample_dump(const std::filesystem::path& path,
                       const SampleBatch& batch) {
    std::string bytes;
    bytes.reserve(16 + static_cast<std::size_t>(batch.samples.size()) * 8);
    bytes.append(kDumpMagic, sizeof(kDumpMagic));
    const auto n_samples = static_cast<std::uint32_t>(batch.n_samples);
    const auto n_modes = static_cast<std::uint32_t>(batch.n_modes);
    bytes.append(reinterpret_cast<const char*>(&n_samples), 4);
    bytes.append(reinterpret_cast<const char*>(&n_modes), 4);
    for (long i = 0; i < batch.n_samples; ++i) {
        for (int j = 0; j < 2 * batch.n_modes; ++j) {
            const double v = batch.samples(i, j);
            bytes.append(reinterpret_cast<const char*>(&v), 8);
        }
    }
    write_text_atomic(path, bytes);
}

SampleBatch read_sample_dump(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw InvalidArgument("cannot open sample dump: " + path.string());
    }
    char magic[8];
    std::uint32_t n_samples = 0, n_modes = 0;
    in.read(magic, 8);
    in.read(reinterpret_cast<char*>(&n_samples), 4);
    in.read(reinterpret_cast<char*>(&n_modes), 4);
    if (!in || std::memcmp(magic, kDumpMagic, 8) != 0) {
        throw InvalidArgument("bad sample dump header: " + path.string());
    }
    SampleBatch batch;
    batch.n_samples = n_samples;
    batch.n_modes = static_cast<int>(n_modes);
    batch.samples.resize(n_samples, 2 * static_cast<long>(n_modes));
    for (std::uint32_t i = 0; i < n_samples; ++i) {
        for (std::uint32_t j = 0; j < 2 * n_modes; ++j) {
            double v = 0.0;
            in.read(reinterpret_cast<char*>(&v), 8);
            batch.samples(i, j) = v;
        }
    }
    if (!in) {
        throw InvalidArgument("truncated sample dump: " + path.string());
    }
    return batch;
}

}  // namespace epr
