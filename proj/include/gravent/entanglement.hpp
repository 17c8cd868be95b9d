#pragma once

#include "gravent/amplitudes.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>

namespace gravent {

using Matrix4c = Eigen::Matrix<cplx, 4, 4>;
using Vector4c = Eigen::Matrix<cplx, 4, 1>;

class StateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// 4x4 density matrix over the branch basis (LL, LR, RL, RR).
/// Construction checks Hermiticity and unit trace; positivity is checked separately.
class DensityMatrix4 {
public:
    static constexpr double hermitian_tol = 1e-12;
    static constexpr double trace_tol = 1e-12;
    static constexpr double psd_tol = 1e-10;

    explicit DensityMatrix4(const Matrix4c& m) : m_(m) {
        if (!m_.allFinite()) throw StateError("density matrix has non-finite entries");
        if (hermiticity_defect(m_) > hermitian_tol) throw StateError("density matrix is not Hermitian");
        if (std::abs(m_.trace() - cplx{1.0}) > trace_tol) throw StateError("density matrix trace is not 1");
    }

    const Matrix4c& matrix() const { return m_; }
    cplx operator()(int r, int c) const { return m_(r, c); }

    Eigen::Vector4d eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<Matrix4c> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }
    bool is_psd(double tol = psd_tol) const { return eigenvalues().minCoeff() >= -tol; }

    static double hermiticity_defect(const Matrix4c& m) { return (m - m.adjoint()).cwiseAbs().maxCoeff(); }

private:
    Matrix4c m_;
};

/// |psi><psi| with psi = alpha / |alpha|.
inline DensityMatrix4 assemble_state(const AmplitudeSet& amps) {
    Vector4c psi;
    for (int k = 0; k < 4; ++k) {
        if (!std::isfinite(amps.alpha[k].real()) || !std::isfinite(amps.alpha[k].imag())) {
            throw StateError("amplitude " + BranchPair::from_index(k).name() + " is not finite");
        }
        psi(k) = amps.alpha[k];
    }
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw StateError("all amplitudes are zero; state cannot be normalised");
    psi /= norm;
    Matrix4c rho = psi * psi.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix4(rho);
}

/// Partial transpose over the second object: rho_{(ij),(kl)} -> rho_{(il),(kj)}.
inline Matrix4c partial_transpose_second(const Matrix4c& m) {
    Matrix4c out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) out(2 * i + l, 2 * k + j) = m(2 * i + j, 2 * k + l);
    return out;
}

/// Sum of |negative eigenvalues| of the partial transpose.
inline double negativity(const Matrix4c& rho) {
    if (DensityMatrix4::hermiticity_defect(rho) > DensityMatrix4::hermitian_tol) {
        throw StateError("negativity: input is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(partial_transpose_second(rho), Eigen::EigenvaluesOnly);
    double neg = 0.0;
    for (int k = 0; k < 4; ++k) {
        if (es.eigenvalues()(k) < 0.0) neg -= es.eigenvalues()(k);
    }
    return neg;
}

inline double negativity(const DensityMatrix4& rho) { return negativity(rho.matrix()); }

struct EntanglementReport {
    double negativity = 0.0;
    bool separable = false;
    std::optional<BranchPair> dominant_pair; // empty when separable
};

/// alpha_ij = a_i b_j  <=>  alpha_LL alpha_RR = alpha_LR alpha_RL.
inline bool factorizes(const AmplitudeSet& amps, double rel_tol = 1e-12) {
    double scale = 0.0;
    for (const auto& a : amps.alpha) scale = std::max(scale, std::norm(a));
    const cplx det = amps[LL] * amps[RR] - amps[LR] * amps[RL];
    return std::abs(det) <= rel_tol * scale;
}

/// Negativity, separability, and the branch that deviates most from the
/// geometric mean of the four amplitudes.
inline EntanglementReport classify(const AmplitudeSet& amps) {
    EntanglementReport rep;
    rep.negativity = negativity(assemble_state(amps));
    rep.separable = factorizes(amps);
    if (rep.separable) return rep;

    cplx log_sum{0.0, 0.0};
    for (const auto& a : amps.alpha) log_sum += std::log(a);
    const cplx geo = std::exp(log_sum / 4.0);
    int best = 0;
    double best_dev = -1.0;
    for (int k = 0; k < 4; ++k) {
        const double dev = std::abs(amps.alpha[k] - geo);
        if (dev > best_dev) {
            best_dev = dev;
            best = k;
        }
    }
    rep.dominant_pair = BranchPair::from_index(best);
    return rep;
}

} // namespace gravent
