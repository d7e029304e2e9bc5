#ifndef DDFRAC_IO_HPP
#define DDFRAC_IO_HPP

#include <filesystem>
#include <string>

#include "ddfrac/harness.hpp"
#include "ddfrac/resistance.hpp"

namespace ddfrac {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal representation (locale-independent).
std::string format_double(double v);
/// Fixed 17-significant-digit representation used for data-set columns.
std::string format_double_full(double v);

/// Data sets travel as CSV (`a,F_R,G_R`, one row per point, full precision)
/// plus a JSON sidecar holding the provenance metadata.
void write_dataset_csv(const ResistanceDataSet& d, const std::filesystem::path& csv_path);
void write_dataset_meta(const ResistanceDataSet& d, const std::filesystem::path& json_path);
ResistanceDataSet read_dataset_csv(const std::filesystem::path& csv_path,
                                   const std::filesystem::path& meta_path = {});

/// Traces travel as CSV: `k,DeltaT,a,Delta,P,G_DD,dissipative,failed`
/// (G_DD empty when absent, flags as 0/1).
void write_trace_csv(const SolutionTrace& t, const std::filesystem::path& path);
SolutionTrace read_trace_csv(const std::filesystem::path& path);

/// Convergence reports serialize to a single JSON document; the per-entry
/// error histograms additionally go to plot-ready CSVs next to it.
void write_report_json(const ConvergenceReport& r, const std::filesystem::path& path);
void write_report_histograms(const ConvergenceReport& r, const std::filesystem::path& dir);

}  // namespace ddfrac

#endif
