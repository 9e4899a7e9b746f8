#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperdiff/central_solver.hpp"
#include "hyperdiff/hyper_solver.hpp"
#include "hyperdiff/mesh.hpp"

namespace hyperdiff::cli {

enum class SchemeKind { Hyperbolic, HyperbolicUnrefined, Central };

struct EmitFlags {
    bool field = false;
    bool profile = false;
    bool speed = false;
    bool report = false;
    bool gnuplot = false;
};

struct RunConfig {
    std::string case_name = "A";
    int n_x = 100;
    int n_y = 100;
    double ratio = 1e4;
    std::optional<double> theta;
    double alpha_s = 1.0;
    std::optional<double> dt;  ///< unset: 1e-4 for hyperbolic, 0.99 x stability limit for central
    double tol = 1e-8;
    std::int64_t max_steps = 1'000'000;
    std::int64_t report_every = 1000;
    SchemeKind scheme = SchemeKind::Hyperbolic;
    Closure closure = Closure::Ghost;
    WallGhost wall = WallGhost::Conormal;
    double dmp_tol = kDefaultDmpTol;
    std::string out = "out";
    EmitFlags emit{true, true, true, true, false};
    std::vector<double> alphas{0.5, 1.0, 2.0, 4.0};
};

/// Keys accepted in config files, HYPERDIFF_* variables and flags (dashes
/// and underscores are interchangeable).
const std::vector<std::string>& known_keys();

/// Set one key from its text value. Throws InvalidArgument for unknown keys
/// or malformed values.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

/// Parse flat `key = value` lines; `#` starts a comment.
std::map<std::string, std::string> parse_config_text(std::istream& in, const std::string& source);

std::string scheme_name(SchemeKind s);
std::string closure_name(Closure c);

struct RunResult {
    FieldState state;
    ConvergenceHistory history;
    DmpReport dmp;
    double dt = 0.0;
    std::optional<double> linear_profile_error;  ///< case A with an isotropic tensor
    std::optional<double> flux_residual;         ///< hyperbolic schemes only
};

/// Solve one configuration. Solver errors propagate.
RunResult execute_run(const RunConfig& cfg);

/// Report text (JSON, keys sorted, ends with a newline).
std::string report_json(const RunConfig& cfg, const RunResult& r);

/// Entry point used by the hyperdiff binary. Returns the process exit code:
/// 0 success, 1 error, 2 non-convergence.
int main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace hyperdiff::cli
