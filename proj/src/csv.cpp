#include "zd/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

namespace zd {
namespace {

void write_provenance(std::ostream& out, const Provenance& prov) {
  for (const auto& [k, v] : prov) out << "# " << k << " = " << v << '\n';
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = line.find(',');
    out.emplace_back(line.substr(0, comma));
    if (comma == std::string_view::npos) return out;
    line.remove_prefix(comma + 1);
  }
}

}  // namespace

std::string format_float(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", x);
  return buf;
}

void write_time_series(std::ostream& out, const Provenance& prov, const Trajectory& traj) {
  write_provenance(out, prov);
  out << kTimeSeriesHeader << '\n';
  for (const auto& r : traj.rows) {
    out << format_float(r.t) << ',' << format_float(r.purity) << ',' << format_float(r.fidelity_S) << ','
        << format_float(r.p_gg) << ',' << format_float(r.p_T) << ',' << format_float(r.p_S) << ','
        << format_float(r.p_ee) << ',' << format_float(r.p_rr) << ',' << format_float(r.n_photon) << '\n';
  }
}

void write_sweep(std::ostream& out, const Provenance& prov, const std::vector<SweepRow>& rows) {
  write_provenance(out, prov);
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format_float(r.gamma) << ',' << format_float(r.kappa) << ','
        << (r.cooperativity ? format_float(*r.cooperativity) : std::string()) << ',';
    if (r.ok) {
      out << format_float(r.fidelity) << ',' << format_float(r.residual) << ',' << (r.unique ? "true" : "false");
    } else {
      out << "nan,nan,failed";
    }
    out << '\n';
  }
}

void write_deviation(std::ostream& out, const Provenance& prov, const std::vector<DeviationRow>& rows) {
  write_provenance(out, prov);
  out << kDeviationHeader << '\n';
  for (const auto& r : rows) {
    out << format_float(r.delta_over_delta) << ',';
    if (r.ok) {
      out << format_float(r.fidelity) << ',' << format_float(r.residual) << ',' << (r.unique ? "true" : "false");
    } else {
      out << "nan,nan,failed";
    }
    out << '\n';
  }
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + tmp.string() + "' for writing");
    f << body;
    f.flush();
    if (!f) throw IoError("failed writing '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InvalidArgument("csv: missing column '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (line.rfind("# ", 0) == 0) {
      const auto eq = line.find(" = ");
      if (eq == std::string::npos) continue;
      table.provenance.emplace_back(line.substr(2, eq - 2), line.substr(eq + 3));
      continue;
    }
    if (table.header.empty()) {
      table.header = split(line);
      continue;
    }
    auto cells = split(line);
    if (cells.size() != table.header.size()) {
      throw InvalidArgument("csv line " + std::to_string(number) + ": expected " + std::to_string(table.header.size()) +
                            " fields, got " + std::to_string(cells.size()));
    }
    table.rows.push_back(std::move(cells));
  }
  return table;
}

}  // namespace zd
