// File emission: trace and curve CSVs, the binary quadrature-sample dump,
// and atomic writes (temp file + rename) so a failed run never leaves a
// partial output behind.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "epr/criterion.hpp"
#include "epr/detection.hpp"
#include "epr/mc_oracle.hpp"
#include "epr/phasematch.hpp"

namespace epr {

// frequency_hz,power_db,rbw_hz,vbw_hz,n_averages,normalized
std::string trace_csv(const SpectrumTrace& trace);

// frequency_hz,delta_epr,var_x_minus,var_p_plus,entangled
std::string epr_csv(const std::vector<FrequencyEpr>& points);

// signal_wavelength_m,efficiency
std::string pm_curve_csv(const PmCurve& curve);

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content);

// Binary dump: 16-byte header (magic "EPRMC001", u32 n_samples,
// u32 n_modes, little endian) followed by the n_samples x 2n sample matrix
// as row-major little-endian 64-bit floats.
void write_sample_dump(const std::filesystem::path& path,
                       const SampleBatch& batch);
SampleBatch read_sample_dump(const std::filesystem::path& path);

}  // namespace epr
