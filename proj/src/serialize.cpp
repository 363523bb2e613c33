#include "torsionlab/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

namespace torsionlab::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void emit(const Json& j, int indent, int depth, std::string& out) {
  const bool pretty = indent >= 0;
  auto newline = [&](int d) {
    if (!pretty) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += pretty ? ": " : ":";
        emit(it.value(), indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        emit(v, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      const std::string s = format_double(v);
      out += std::isfinite(v) ? s : "\"" + s + "\"";
      return;
    }
    default:
      out += j.dump();
  }
}

std::string csv_double(double v) { return format_double(v); }

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  emit(j, indent, 0, out);
  return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(dir, ec))
    fail(ErrorKind::Io, "output directory does not exist: " + dir.string());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) fail(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
    os << content;
    os.flush();
    if (!os) {
      os.close();
      fs::remove(tmp, ec);
      fail(ErrorKind::Io, "write to " + tmp.string() + " failed");
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignore;
    fs::remove(tmp, ignore);
    fail(ErrorKind::Io, "cannot rename onto " + path.string() + ": " + ec.message());
  }
}

Json to_json(const phg::ExpansionTemplate& tpl) {
  Json terms = Json::array();
  for (const auto& t : tpl.terms)
    terms.push_back({{"exp", phg::to_string(t.exponent)}, {"log", t.log}, {"source", phg::to_string(t.source)}});
  return {{"terms", terms},      {"m", tpl.m},
          {"b", tpl.b},          {"even", tpl.even},
          {"boundary", tpl.boundary}, {"cutoff", phg::to_string(tpl.cutoff)}};
}

Json to_json(const phg::ZetaPoleStructure& z) {
  Json poles = Json::array();
  for (const auto& p : z.poles) poles.push_back({{"location", phg::to_string(p.location)}, {"order", p.order}});
  return {{"poles", poles},
          {"regular_at_zero", z.regular_at_zero},
          {"has_t0_term", z.has_t0_term},
          {"zeta0_rule", z.zeta0_rule}};
}

Json to_json(const fiber::NuSpectrum& s) {
  Json modes = Json::array();
  for (const auto& m : s.modes) {
    const auto [gm, gp] = m.indicial_roots();
    modes.push_back({{"nu", m.nu},
                     {"mult", m.multiplicity},
                     {"p", m.cone_degree},
                     {"roots", {gm, gp}},
                     {"log_branch", m.log_branch()},
                     {"origin", fiber::to_string(m.origin)},
                     {"mu2", m.mu2}});
  }
  return {{"convention", fiber::to_string(s.convention)}, {"cutoff", s.cutoff}, {"modes", modes}};
}

Json to_json(const cone::TraceSamples& s) {
  return {{"t", s.grid}, {"value", s.values}, {"tail_bound", s.tail_bound}};
}

Json to_json(const cone::FittedExpansion& fit) {
  Json coeffs = Json::array();
  for (std::size_t j = 0; j < fit.tpl.terms.size(); ++j) {
    const auto& t = fit.tpl.terms[j];
    coeffs.push_back({{"exp", phg::to_string(t.exponent)},
                      {"log", t.log},
                      {"value", fit.coefficients[j]},
                      {"error", fit.coefficient_errors.empty() ? 0.0 : fit.coefficient_errors[j]}});
  }
  return {{"template", to_json(fit.tpl)},
          {"coefficients", coeffs},
          {"residual", fit.residual},
          {"condition", fit.condition},
          {"window", {{"t_min", fit.t_min}, {"t_max", fit.t_max}, {"samples", fit.samples_used}}}};
}

Json to_json(const zeta::ZetaData& z) {
  Json poles = Json::array();
  for (const auto& p : z.poles)
    poles.push_back({{"location", phg::to_string(p.location)},
                     {"order", p.order},
                     {"leading", p.leading},
                     {"residue", p.residue},
                     {"error", p.error}});
  const auto& d = z.diagnostics;
  return {{"degree", z.degree},
          {"poles", poles},
          {"regular_at_zero_predicted", z.regular_at_zero_predicted},
          {"residue_at_zero", z.residue_at_zero},
          {"residue_error", z.residue_error},
          {"zeta0", z.zeta0},
          {"zeta0_minus_kernel", z.zeta0_minus_kernel},
          {"zeta0_error", z.zeta0_error},
          {"zeta_prime0", z.zeta_prime0},
          {"zeta_prime0_error", z.zeta_prime0_error},
          {"kernel_dim", z.kernel_dim},
          {"diagnostics",
           {{"split", d.split},
            {"t_min", d.t_min},
            {"lambda_min", d.lambda_min},
            {"remainder_integral", d.remainder_integral},
            {"remainder_error", d.remainder_error},
            {"large_t_integral", d.large_t_integral},
            {"large_t_error", d.large_t_error},
            {"fit_error", d.fit_error},
            {"truncation_error", d.truncation_error}}}};
}

Json to_json(const zeta::TorsionReport& r) {
  Json per = Json::array();
  for (const auto& z : r.per_degree) per.push_back(to_json(z));
  return {{"model", r.model},
          {"top_degree", r.m},
          {"log_T", r.log_T},
          {"log_T_error", r.log_T_error},
          {"torsion_residue", r.torsion_residue},
          {"torsion_residue_error", r.torsion_residue_error},
          {"per_degree_regular", r.per_degree_regular},
          {"residues_cancel", r.residues_cancel},
          {"torsion_zeta_regular", r.torsion_zeta_regular},
          {"per_degree", per}};
}

Json error_json(ErrorKind kind, const std::string& message) {
  return {{"schema", kSchema},
          {"error", {{"kind", std::string(to_string(kind))}, {"message", message}}}};
}

std::string samples_csv(const cone::TraceSamples& s) {
  std::ostringstream os;
  os << "t,value,tail_bound\n";
  for (std::size_t i = 0; i < s.size(); ++i)
    os << csv_double(s.grid[i]) << ',' << csv_double(s.values[i]) << ','
       << csv_double(s.tail_bound[i]) << '\n';
  return os.str();
}

std::string torsion_csv(const zeta::TorsionReport& r) {
  std::ostringstream os;
  os << "degree,zeta0,zeta_prime0,kernel_dim,zeta0_error,zeta_prime0_error\n";
  for (const auto& z : r.per_degree)
    os << z.degree << ',' << csv_double(z.zeta0) << ',' << csv_double(z.zeta_prime0) << ','
       << z.kernel_dim << ',' << csv_double(z.zeta0_error) << ','
       << csv_double(z.zeta_prime0_error) << '\n';
  return os.str();
}

}  // namespace torsionlab::io
