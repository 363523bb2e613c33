#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "torsionlab/conekernel.hpp"
#include "torsionlab/error.hpp"
#include "torsionlab/fiber.hpp"
#include "torsionlab/phg_index.hpp"
#include "torsionlab/zetator.hpp"

namespace torsionlab::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "torsionlab/1";

// Every double is printed with 17 significant digits ("%.17g"); non-finite
// values become the strings "inf", "-inf" and "nan".
std::string format_double(double v);
std::string dump(const Json& j, int indent = 2);

// Writes to a temporary sibling and renames it over the target.  Throws Io
// when the directory does not exist or the write fails.
void write_atomic(const std::filesystem::path& path, const std::string& content);

Json to_json(const phg::ExpansionTemplate& tpl);
Json to_json(const phg::ZetaPoleStructure& poles);
Json to_json(const fiber::NuSpectrum& spectrum);
Json to_json(const cone::TraceSamples& samples);
Json to_json(const cone::FittedExpansion& fit);
Json to_json(const zeta::ZetaData& z);
Json to_json(const zeta::TorsionReport& report);
Json error_json(ErrorKind kind, const std::string& message);

// Columns t,value,tail_bound.
std::string samples_csv(const cone::TraceSamples& samples);
// Columns degree,zeta0,zeta_prime0,kernel_dim,zeta0_error,zeta_prime0_error.
std::string torsion_csv(const zeta::TorsionReport& report);

}  // namespace torsionlab::io
