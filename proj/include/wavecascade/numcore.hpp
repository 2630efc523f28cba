#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace wavecascade {

using Complex = std::complex<double>;

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SingularMatrix : SolverError { using SolverError::SolverError; };
struct StepFailure : SolverError { using SolverError::SolverError; };
struct QuadratureFailure : SolverError { using SolverError::SolverError; };
struct RootCollision : SolverError { using SolverError::SolverError; };
struct NoConvergence : SolverError { using SolverError::SolverError; };
struct DegenerateQ : SolverError { using SolverError::SolverError; };
struct GridTooCoarse : SolverError { using SolverError::SolverError; };
struct SingularSystem : SolverError { using SolverError::SolverError; };
struct ZeroIncidentPower : SolverError { using SolverError::SolverError; };
struct ConfigError : SolverError { using SolverError::SolverError; };

/// Dense complex matrix, row-major storage.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols) {}

    static CMatrix identity(std::size_t n);
    static CMatrix diagonal(std::span<const Complex> d);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    Complex* data() { return a_.data(); }
    const Complex* data() const { return a_.data(); }

    CMatrix& operator+=(const CMatrix& o);
    CMatrix& operator-=(const CMatrix& o);
    CMatrix& operator*=(Complex s);

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(const CMatrix& a, const CMatrix& b);

    std::vector<Complex> apply(std::span<const Complex> x) const;

    double norm_inf() const;   // max row sum
    double max_abs() const;    // max entry magnitude

    /// column-major flatten (the convention for matrix-valued ODE states)
    void flatten_to(Complex* out) const;
    void unflatten_from(const Complex* in);

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Complex> a_;
};

/// X with A X = B via LU with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-13 * ||A||_inf.
CMatrix mat_solve(const CMatrix& A, const CMatrix& B);

struct OdeProblem {
    std::function<void(double u, const Complex* y, Complex* dy)> rhs;
    std::size_t size = 0;
    double u_start = 0.0;
    double u_end = 0.0;               // may be < u_start (right-to-left)
    std::vector<Complex> initial;
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
    double max_step = 0.0;            // 0 = unlimited
};

struct OdeTrajectory {
    std::vector<double> stations;
    std::vector<std::vector<Complex>> states;
};

/// Dense continuous solution of one adaptive integration (DOPRI5 interpolant).
class OdeDenseSolution {
public:
    void eval(double u, Complex* out) const;
    std::vector<Complex> eval(double u) const;
    const std::vector<Complex>& final_state() const { return final_; }
    double u_begin() const { return u0_; }
    double u_final() const { return u1_; }

private:
    friend OdeDenseSolution integrate_dense(const OdeProblem&);
    struct Step {
        double u, h;                       // step from u to u+h
        std::vector<Complex> r1, r2, r3, r4, r5;
    };
    std::vector<Step> steps_;
    std::vector<Complex> final_;
    double u0_ = 0.0, u1_ = 0.0;
    std::size_t n_ = 0;
};

/// Adaptive embedded Dormand-Prince RK45 with dense output.
OdeDenseSolution integrate_dense(const OdeProblem& prob);

/// Convenience: integrate and sample the dense solution at the given stations.
OdeTrajectory integrate(const OdeProblem& prob, std::span<const double> stations);

}  // namespace wavecascade
