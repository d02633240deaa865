#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "orthospline/analysis.hpp"
#include "orthospline/gram.hpp"
#include "orthospline/knots.hpp"
#include "orthospline/ortho.hpp"

namespace orthospline {

using Json = nlohmann::ordered_json;

/// {"k", "points"}
Json to_json(const KnotSequence& seq);
/// Validates through validate_admissible.
KnotSequence knot_sequence_from_json(const Json& j);

/// {"seed", "law", "n_points"}
Json generator_json(std::uint64_t seed, KnotLaw law, int n_points);

/// {"k", "knots", "coeffs"}
Json to_json(const Spline& f);
Spline spline_from_json(const Json& j);

Json to_json(const DecayProfile& d);
Json to_json(const CensusResult& c);
Json to_json(const ExperimentReport& r);
Json to_json(const TailAuditReport& r);

/// One entry per f_n: {level, i0, knots_hash, coeffs, J, norm2}. The
/// polynomial block has i0 = null and norm2 = 1.
Json export_system(const OrthoSystem& system);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);
std::uint64_t hash_doubles(std::span<const double> xs);
std::string hex64(std::uint64_t h);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace orthospline
