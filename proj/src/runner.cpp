#include "wavecascade/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "wavecascade/csv.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace wavecascade {

Materialized materialize(const SolveConfig& cfg) {
    cfg.validate();
    if (!std::holds_alternative<BlockElement>(cfg.elements.front()) ||
        !std::holds_alternative<BlockElement>(cfg.elements.back()))
        throw ConfigError("structure must start and end with a block");
    Materialized m;
    m.N = cfg.N;
    m.du = cfg.du;
    m.rel_tol = cfg.rel_tol;
    m.abs_tol = cfg.abs_tol;
    bool expecting_block = true;
    for (const auto& el : cfg.elements) {
        if (const auto* b = std::get_if<BlockElement>(&el)) {
            if (!expecting_block) {
                // two consecutive blocks: insert a virtual zero-length connector
                m.guides.push_back({m.blocks.back().width_right(), 0.0});
            }
            m.blocks.emplace_back(b->map, AdmittanceProfile(b->admittance),
                                  b->u_left, b->u_right);
            expecting_block = false;
        } else {
            m.guides.push_back(std::get<StraightGuide>(el));
            expecting_block = true;
        }
    }
    // adjacent width consistency
    for (std::size_t j = 0; j < m.guides.size(); ++j) {
        const double wl = m.blocks[j].width_right();
        const double wr = m.blocks[j + 1].width_left();
        if (std::abs(wl - m.guides[j].width) > 1e-3 * wl ||
            std::abs(wr - m.guides[j].width) > 1e-3 * wr)
            throw ConfigError("adjacent widths do not match at connector " +
                              std::to_string(j));
    }
    m.incident.assign(cfg.N, 0.0);
    for (std::size_t i = 0; i < std::min(cfg.incident.size(), cfg.N); ++i)
        m.incident[i] = cfg.incident[i];
    if (cfg.incident.empty()) m.incident[0] = 1.0;
    return m;
}

KSolution solve_at_k(const Materialized& m, double k, bool parallel_tables) {
    KSolution sol;
    sol.k = k;
    TableOptions topt;
    topt.du = m.du;
    topt.parallel = parallel_tables;
    RtOptions ropt{m.rel_tol, m.abs_tol};
    for (const auto& b : m.blocks) {
        sol.tables.push_back(build_table(b, k, m.N, topt));
        sol.S.push_back(solve_rt(sol.tables.back(), ropt));
    }
    sol.chain = cascade_chain(sol.S, m.guides, k);
    sol.power = power_ratio(sol.chain.S_total, m.incident, k);
    return sol;
}

void cmd_solve(const SolveConfig& cfg, std::ostream& csv, std::ostream& err) {
    const Materialized m = materialize(cfg);
    const std::size_t nk = cfg.k_values.size();
    std::vector<std::string> rows(nk);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(nk); ++i) {
        const double k = cfg.k_values[static_cast<std::size_t>(i)];
        try {
            const KSolution sol = solve_at_k(m, k);
            const auto refl = sol.chain.S_total.R_plus.apply(m.incident);
            const auto trans = sol.chain.S_total.T_plus.apply(m.incident);
            std::ostringstream os;
            os << csv_num(k) << ',' << csv_num(sol.power.ratio);
            for (std::size_t n = 0; n < m.N; ++n)
                os << ',' << csv_num(std::abs(refl[n]));
            for (std::size_t n = 0; n < m.N; ++n)
                os << ',' << csv_num(std::abs(trans[n]));
            rows[static_cast<std::size_t>(i)] = os.str();
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "k=" << k << ": " << e.what() << "\n";
#ifdef _OPENMP
#pragma omp critical
#endif
            err << msg.str();
        }
    }

    csv << "k,P";
    for (std::size_t n = 0; n < m.N; ++n) csv << ",abs_R" << n << "0";
    for (std::size_t n = 0; n < m.N; ++n) csv << ",abs_T" << n << "0";
    csv << '\n';
    for (const auto& r : rows)
        if (!r.empty()) csv << r << '\n';
}

namespace {

// total field at the left face of block j and the left-going wave at its right
// face, from the cascade interface coefficients
struct BlockBoundary {
    std::vector<Complex> plus_left;    // Phi+ at the left face
    std::vector<Complex> minus_right;  // Phi- at the right face
};

BlockBoundary block_boundary(const Materialized& m, const KSolution& sol,
                             std::size_t j) {
    BlockBoundary bb;
    const std::size_t N = m.N;
    if (j == 0) {
        bb.plus_left = m.incident;
    } else {
        const auto& g = m.guides[j - 1];
        const auto U = propagator_U(g.width, sol.k, g.length, N);
        const auto cp = sol.chain.C_plus[j - 1].apply(m.incident);
        bb.plus_left.resize(N);
        for (std::size_t n = 0; n < N; ++n) bb.plus_left[n] = U[n] * cp[n];
    }
    if (j + 1 < m.blocks.size()) {
        bb.minus_right = sol.chain.C_minus[j].apply(m.incident);
    } else {
        bb.minus_right.assign(N, 0.0);
    }
    return bb;
}

// DtN field through one block: total Phi at the table stations
std::vector<std::vector<Complex>> dtn_block_field(const CoefficientTable& tab,
                                                  const DtNSolution& dtn,
                                                  const BlockBoundary& bb) {
    const std::size_t N = tab.N;
    // Phi_R(u1) = (I + R+) Phi+(u1), with R+ from Lambda_R(u1)
    const CMatrix Rp = dtn_reflection_plus(tab, dtn);
    std::vector<Complex> phiR1(bb.plus_left.begin(), bb.plus_left.end());
    const auto refl = Rp.apply(bb.plus_left);
    for (std::size_t n = 0; n < N; ++n) phiR1[n] += refl[n];
    auto phi = propagate_field(tab, dtn, phiR1);
    // right-sourced part from the incoming minus wave at u2
    bool any = false;
    for (const auto& q : bb.minus_right) any = any || (q != 0.0);
    if (any) {
        const auto phiL2 = dtn_left_boundary_field(tab, dtn, bb.minus_right);
        const auto phiL = propagate_field_left(tab, dtn, phiL2);
        for (std::size_t i = 0; i < phi.size(); ++i)
            for (std::size_t n = 0; n < N; ++n) phi[i][n] += phiL[i][n];
    }
    return phi;
}

double arclength_scale(const ConformalBlock& b, double u) {
    return std::abs(b.map().derivatives(Complex(u, 0.5)).d1);
}

}  // namespace

void cmd_field(const SolveConfig& cfg, double k, const std::string& out_dir) {
    const Materialized m = materialize(cfg);
    const KSolution sol = solve_at_k(m, k, true);
    std::filesystem::create_directories(out_dir);

    std::ofstream modal(out_dir + "/modal.csv");
    std::ofstream field2d(out_dir + "/field2d.csv");
    modal << "s,u,element";
    for (std::size_t n = 0; n < m.N; ++n) modal << ",re" << n << ",im" << n;
    modal << '\n';
    field2d << "u,v,x,y,re,im\n";

    std::vector<double> v_grid;
    for (int j = 0; j <= 20; ++j) v_grid.push_back(j / 20.0);

    double s0 = 0.0;
    for (std::size_t j = 0; j < m.blocks.size(); ++j) {
        const auto& tab = sol.tables[j];
        const DtNSolution dtn =
            solve_dtn_operators(tab, {m.rel_tol, m.abs_tol});
        const auto bb = block_boundary(m, sol, j);
        const auto phi = dtn_block_field(tab, dtn, bb);

        // arclength along the centerline of this block
        std::vector<double> s(tab.u_grid.size(), s0);
        for (std::size_t i = 1; i < tab.u_grid.size(); ++i) {
            const double du = tab.u_grid[i] - tab.u_grid[i - 1];
            s[i] = s[i - 1] + 0.5 * du *
                   (arclength_scale(m.blocks[j], tab.u_grid[i - 1]) +
                    arclength_scale(m.blocks[j], tab.u_grid[i]));
        }
        for (std::size_t i = 0; i < tab.u_grid.size(); ++i) {
            modal << csv_num(s[i]) << ',' << csv_num(tab.u_grid[i]) << ",block"
                  << j;
            for (std::size_t n = 0; n < m.N; ++n)
                modal << ',' << csv_num(phi[i][n].real()) << ','
                      << csv_num(phi[i][n].imag());
            modal << '\n';
        }
        const FieldMap fm = reconstruct_field(phi, tab, m.blocks[j].map(), v_grid);
        for (const auto& smp : fm)
            field2d << csv_num(smp.u) << ',' << csv_num(smp.v) << ','
                    << csv_num(smp.z.real()) << ',' << csv_num(smp.z.imag()) << ','
                    << csv_num(smp.phi.real()) << ',' << csv_num(smp.phi.imag())
                    << '\n';
        s0 = s.back();

        if (j < m.guides.size()) {
            const auto& g = m.guides[j];
            const int nc = std::max(2, static_cast<int>(g.length / 0.01));
            for (int i = 0; i <= nc; ++i) {
                const double u = g.length * i / nc;
                const auto phi_c = connector_field(sol.chain.C_plus[j],
                                                   sol.chain.C_minus[j], g, k, u,
                                                   m.incident);
                modal << csv_num(s0 + u) << ',' << csv_num(u) << ",guide" << j;
                for (std::size_t n = 0; n < m.N; ++n)
                    modal << ',' << csv_num(phi_c[n].real()) << ','
                          << csv_num(phi_c[n].imag());
                modal << '\n';
            }
            s0 += g.length;
        }
    }
    modal.close();
    field2d.close();

    std::ofstream gp(out_dir + "/plot_field.gp");
    gp << "# gnuplot script: real parts of the lowest modal coefficients\n"
       << "set datafile separator ','\n"
       << "set xlabel 'distance along the central curve'\n"
       << "set ylabel 'Re Phi_n'\n"
       << "plot 'modal.csv' using 1:4 every ::1 with lines title 'Re Phi_0'";
    if (m.N > 1) gp << ", \\\n     'modal.csv' using 1:6 every ::1 with lines title 'Re Phi_1'";
    if (m.N > 2) gp << ", \\\n     'modal.csv' using 1:8 every ::1 with lines title 'Re Phi_2'";
    gp << "\npause -1\n";
}

ValidateRow validate_at_k(const Materialized& m, double k) {
    ValidateRow row;
    row.k = k;
    const KSolution sol = solve_at_k(m, k, true);
    const std::size_t N = m.N;
    const std::size_t last = m.blocks.size() - 1;

    // RT side
    std::vector<Complex> border_rt(N, 0.0);
    if (!m.guides.empty()) {
        const auto cp = sol.chain.C_plus[0].apply(m.incident);
        const auto cm = sol.chain.C_minus[0].apply(m.incident);
        for (std::size_t n = 0; n < N; ++n) border_rt[n] = cp[n] + cm[n];
    }
    const auto end_rt = sol.chain.S_total.T_plus.apply(m.incident);

    // DtN side
    const DtnOptions dopt{m.rel_tol, m.abs_tol};
    if (!m.guides.empty()) {
        const DtNSolution dtn0 = solve_dtn_operators(sol.tables[0], dopt);
        const auto bb0 = block_boundary(m, sol, 0);
        const auto phi0 = dtn_block_field(sol.tables[0], dtn0, bb0);
        row.border_delta.resize(N);
        for (std::size_t n = 0; n < N; ++n)
            row.border_delta[n] = std::abs(phi0.back()[n] - border_rt[n]);
    }
    {
        const DtNSolution dtnL = solve_dtn_operators(sol.tables[last], dopt);
        const auto bbL = block_boundary(m, sol, last);
        const auto phiL = dtn_block_field(sol.tables[last], dtnL, bbL);
        row.end_delta.resize(N);
        for (std::size_t n = 0; n < N; ++n)
            row.end_delta[n] = std::abs(phiL.back()[n] - end_rt[n]);
    }

    // FD oracle over the glued strip
    {
        std::vector<StripSegment> segs;
        for (std::size_t j = 0; j < m.blocks.size(); ++j) {
            segs.push_back(segment_of_block(m.blocks[j]));
            if (j < m.guides.size()) segs.push_back(segment_of_guide(m.guides[j]));
        }
        double total = 0.0, mumax = 0.0;
        for (const auto& s : segs) total += s.length;
        for (const auto& s : segs)
            for (int i = 0; i <= 10; ++i)
                mumax = std::max(mumax, s.mu(s.length * i / 10.0, 1.0));
        const double h = 0.105 / (k * std::sqrt(mumax));
        const auto nu = static_cast<std::size_t>(std::ceil(total / h));
        const auto nv = std::max<std::size_t>(
            16, static_cast<std::size_t>(std::ceil(1.0 / h)));
        const FDResult fd = solve_reference_path(segs, k, 0, nu, nv);
        const double a0_fd = std::abs(fd.transmitted[0]);
        const double a0_fourier = std::abs(end_rt[0]);
        row.fd_rel_delta = std::abs(a0_fourier / a0_fd - 1.0);
    }
    return row;
}

void cmd_validate(const SolveConfig& cfg, std::ostream& csv, std::ostream& err) {
    const Materialized m = materialize(cfg);
    double derived_len = 0.0;
    if (!m.guides.empty()) derived_len = m.guides[0].length;
    csv << "# wavecascade validate report\n";
    csv << "# connector lengths:";
    for (const auto& g : m.guides) csv << ' ' << csv_num(g.length);
    csv << '\n';
    (void)derived_len;
    csv << "k";
    for (std::size_t n = 0; n < std::min<std::size_t>(m.N, 3); ++n)
        csv << ",border_delta" << n;
    for (std::size_t n = 0; n < std::min<std::size_t>(m.N, 3); ++n)
        csv << ",end_delta" << n;
    csv << ",fd_rel_delta0\n";
    for (const double k : cfg.k_values) {
        try {
            const ValidateRow row = validate_at_k(m, k);
            csv << csv_num(k);
            for (std::size_t n = 0; n < std::min<std::size_t>(m.N, 3); ++n)
                csv << ',' << csv_num(row.border_delta.empty() ? 0.0
                                                               : row.border_delta[n]);
            for (std::size_t n = 0; n < std::min<std::size_t>(m.N, 3); ++n)
                csv << ',' << csv_num(row.end_delta[n]);
            csv << ',' << csv_num(row.fd_rel_delta) << '\n';
        } catch (const std::exception& e) {
            err << "k=" << k << ": " << e.what() << '\n';
        }
    }
}

std::vector<Complex> end_plane_modes(const SolveConfig& cfg, double k,
                                     std::size_t N) {
    SolveConfig c = cfg;
    c.N = N;
    c.k_values = {k};
    const Materialized m = materialize(c);
    const KSolution sol = solve_at_k(m, k, true);
    return sol.chain.S_total.T_plus.apply(m.incident);
}

}  // namespace wavecascade
