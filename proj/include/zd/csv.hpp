#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "zd/dynamics.hpp"
#include "zd/scenarios.hpp"

namespace zd {

/// `# key = value` lines written above the header row.
using Provenance = std::vector<std::pair<std::string, std::string>>;

/// 9 significant digits in scientific notation ("%.8e"); "nan" and "inf"
/// spelled in lower case.
std::string format_float(double x);

inline constexpr const char* kTimeSeriesHeader = "t,purity,fidelity_S,p_gg,p_T,p_S,p_ee,p_rr,n_photon";
inline constexpr const char* kSweepHeader = "gamma,kappa,C,fidelity,residual,unique";
inline constexpr const char* kDeviationHeader = "delta_over_Delta,fidelity,residual,unique";

void write_time_series(std::ostream& out, const Provenance& prov, const Trajectory& traj);
/// Failed points carry "nan,nan,failed" in the last three columns; an absent
/// cooperativity is an empty field.
void write_sweep(std::ostream& out, const Provenance& prov, const std::vector<SweepRow>& rows);
void write_deviation(std::ostream& out, const Provenance& prov, const std::vector<DeviationRow>& rows);

/// Writes `body` to path through a temporary sibling that is renamed into
/// place. Throws IoError naming the path.
void write_file(const std::filesystem::path& path, const std::string& body);

struct CsvTable {
  Provenance provenance;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws InvalidArgument naming it when absent.
  std::size_t column(std::string_view name) const;
};

/// Reads the format written above. Throws InvalidArgument on ragged rows.
CsvTable read_csv(std::istream& in);

}  // namespace zd
