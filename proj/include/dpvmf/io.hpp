#ifndef DPVMF_IO_HPP
#define DPVMF_IO_HPP

#include <string>
#include <utility>

#include "dpvmf/common.hpp"
#include "dpvmf/synth.hpp"

namespace dpvmf {

/// Point-file formats:
///  - text: whitespace-separated decimal rows, '#' comments, dimension
///    inferred from the first row
///  - binary: magic "DPVMFB01", u32 dim, u64 count, little-endian float32,
///    row-major
/// read_points sniffs the magic. Without auto_normalize, rows must already be
/// unit-norm within 1e-6.
Batch read_points(const std::string& path, bool auto_normalize);
void write_points_text(const std::string& path, const Batch& batch);
void write_points_binary(const std::string& path, const Batch& batch);

std::vector<long> read_labels(const std::string& path);
void write_labels(const std::string& path, const long* labels, std::size_t n);
void write_labels(const std::string& path, const int* labels, std::size_t n);

/// Scenario file: line-oriented "key value..." text.
///   seed, dim, tau, min_sep_deg, points_per_cluster, pool N
///   mean x y z ...            (optional, repeated; overrides pool)
///   frame id id ...           (repeated, in stream order)
StreamScenario read_scenario(const std::string& path);

/// "key: value" lines with stable key order; round-trips exactly.
using Summary = std::vector<std::pair<std::string, std::string>>;
void write_summary(const std::string& path, const Summary& summary);
Summary read_summary(const std::string& path);

std::string format_double(double v);  // shortest exact round-trip decimal

}  // namespace dpvmf

#endif
