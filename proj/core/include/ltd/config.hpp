#pragma once

#include <filesystem>
#include <string_view>

#include "ltd/fusion.hpp"
#include "ltd/solver.hpp"

namespace ltd {

struct RunConfig {
  LtdParams solver;
  GuidedFilterParams filter;
  DatasetProfile profile = DatasetProfile::Custom;
};

/// key = value lines, '#' starts a comment. Keys: lambda1 .. lambda6, rho,
/// b, p, nu, max_iter, rel_tol, seed, rank_reduction, fusion_mode,
/// dataset_profile, normalize_input, gf_radius, gf_eps, caplp_literal_weight.
/// Unknown or repeated keys, malformed values, and an explicit lambda6 under
/// the abu or mvtec profile are Config errors.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path &path);

} // namespace ltd
