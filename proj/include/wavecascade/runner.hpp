#pragma once

#include <iosfwd>

#include "wavecascade/analysis.hpp"
#include "wavecascade/cascade.hpp"
#include "wavecascade/config.hpp"
#include "wavecascade/dtn_solver.hpp"
#include "wavecascade/fd_oracle.hpp"

namespace wavecascade {

/// Config materialized into solver objects. Consecutive blocks get zero-length
/// connectors; the element list must start and end with a block.
struct Materialized {
    std::vector<ConformalBlock> blocks;
    std::vector<StraightGuide> guides;
    std::size_t N = 0;
    double du = 0.01, rel_tol = 1e-8, abs_tol = 1e-10;
    std::vector<Complex> incident;
};

Materialized materialize(const SolveConfig& cfg);

struct KSolution {
    double k = 0.0;
    std::vector<CoefficientTable> tables;
    std::vector<ScatteringMatrix> S;
    ChainResult chain;
    PowerReport power;
};

KSolution solve_at_k(const Materialized& m, double k, bool parallel_tables = false);

/// Frequency sweep -> CSV (k, P, |R+_n0|, |T+_n0|). Parallel over k.
/// Per-k solver failures are reported on err and the row is skipped.
void cmd_solve(const SolveConfig& cfg, std::ostream& csv, std::ostream& err);

/// Field maps at a single wavenumber: writes <out>/modal.csv, <out>/field2d.csv
/// and <out>/plot_field.gp.
void cmd_field(const SolveConfig& cfg, double k, const std::string& out_dir);

/// RT vs DtN and Fourier vs FD cross-checks -> CSV report.
void cmd_validate(const SolveConfig& cfg, std::ostream& csv, std::ostream& err);

/// End-plane modal vector T+_tot phi_in at one (k, N): used by convergence checks.
std::vector<Complex> end_plane_modes(const SolveConfig& cfg, double k, std::size_t N);

/// Per-k validation pieces, exposed for the acceptance suite.
struct ValidateRow {
    double k = 0.0;
    std::vector<double> border_delta;   // |Phi_dtn - Phi_rt| at the first connector
    std::vector<double> end_delta;      // same at the structure's right end
    double fd_rel_delta = 0.0;          // | |Phi0_fourier| / |Phi0_fd| - 1 |
};
ValidateRow validate_at_k(const Materialized& m, double k);

}  // namespace wavecascade
