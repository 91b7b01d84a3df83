#ifndef HITRUN_IO_HPP
#define HITRUN_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "hitrun/quantum.hpp"

namespace hitrun::io {

// Point samples: header x0,...,x{d-1}, one row per retained sample.
void write_points_csv(const std::string& path, const std::vector<Rvec>& points);
std::vector<Rvec> read_points_csv(const std::string& path);

// Density matrices: one row per state; row-major lower triangle including
// the diagonal, columns re_i_j,im_i_j.  Hermiticity makes this lossless.
void write_states_csv(const std::string& path, const std::vector<DensityMatrix>& states);
std::vector<DensityMatrix> read_states_csv(const std::string& path);

// Two-column curve, header x,density.
void write_curve_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& rows);

// Eigenvalue table, header state,eig,value.
void write_spectra_csv(const std::string& path,
                       const std::vector<std::tuple<long, int, double>>& rows);
std::vector<double> read_spectra_values(const std::string& path);

std::string sha256_file(const std::string& path);

void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

// Run manifest: command line, body descriptor, chain config, timestamps and
// digests of the files the run produced.
nlohmann::json make_manifest(const std::string& command_line,
                             const nlohmann::json& body_descriptor,
                             const nlohmann::json& config,
                             const std::vector<std::string>& output_files);

}  // namespace hitrun::io

#endif
