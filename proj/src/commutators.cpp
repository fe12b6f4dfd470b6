#include "ringpair/commutators.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "ringpair/errors.hpp"

namespace ringpair {

double CommutatorSystem::residual(const CommutatorSet& c) const {
    const std::array<double, 4> x{c.c_aa, c.c_bb, c.d_ab.real(), c.d_ab.imag()};
    double worst = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < 4; ++j) lhs += A[i][j] * x[j];
        worst = std::max(worst, std::abs(lhs - rhs[i]));
    }
    return worst;
}

CommutatorSystem assemble_commutator_system(const TransferPair& pair) {
    const Mat2& G = pair.G;
    const Mat2& H = pair.H;
    CommutatorSystem s;

    // |H_aa|^2 C_aa - |H_ab|^2 C_bb + 2 Re(H_aa H_ab^* D_ab) = 1 - |G_aa|^2 + |G_ab|^2
    const cplx w = H.aa() * std::conj(H.ab());
    s.A[0] = {std::norm(H.aa()), -std::norm(H.ab()), 2.0 * w.real(), -2.0 * w.imag()};
    s.rhs[0] = 1.0 - (std::norm(G.aa()) - std::norm(G.ab()));

    // b_out^dag = G_ba a_in + G_bb b_in^dag + H_ba f_a + H_bb f_b^dag, so the
    // cross term enters [b_out, b_out^dag] with a minus sign:
    // -|H_ba|^2 C_aa + |H_bb|^2 C_bb - 2 Re(H_ba H_bb^* D_ab) = 1 - |G_bb|^2 + |G_ba|^2
    const cplx v = H.ba() * std::conj(H.bb());
    s.A[1] = {-std::norm(H.ba()), std::norm(H.bb()), -2.0 * v.real(), 2.0 * v.imag()};
    s.rhs[1] = 1.0 - (std::norm(G.bb()) - std::norm(G.ba()));

    // H_aa H_ba^* C_aa - H_ab H_bb^* C_bb + H_aa H_bb^* D_ab + H_ab H_ba^* D_ab^*
    //   = G_ab G_bb^* - G_aa G_ba^*
    const cplx p = H.aa() * std::conj(H.ba());
    const cplx q = H.ab() * std::conj(H.bb());
    const cplx u = H.aa() * std::conj(H.bb());
    const cplx t = H.ab() * std::conj(H.ba());
    // u D + t D^* = (u + t) Re D + i (u - t) Im D
    const cplx re_coeff = u + t;
    const cplx im_coeff = kI * (u - t);
    const cplx target = G.ab() * std::conj(G.bb()) - G.aa() * std::conj(G.ba());
    s.A[2] = {p.real(), -q.real(), re_coeff.real(), im_coeff.real()};
    s.rhs[2] = target.real();
    s.A[3] = {p.imag(), -q.imag(), re_coeff.imag(), im_coeff.imag()};
    s.rhs[3] = target.imag();
    return s;
}

CommutatorSolve solve_commutators_numeric(const TransferPair& pair, const SystemConfig& config) {
    if (pair.location != Location::output_bus) {
        throw ValidationError("commutator system is defined on the output bus");
    }
    const CommutatorSystem sys = assemble_commutator_system(pair);
    Eigen::Matrix4d A;
    Eigen::Vector4d b;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) A(i, j) = sys.A[i][j];
        b(i) = sys.rhs[i];
    }

    Eigen::JacobiSVD<Eigen::Matrix4d> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cond = sv(3) > 0.0 ? sv(0) / sv(3) : std::numeric_limits<double>::infinity();

    CommutatorSolve out;
    out.condition_number = cond;
    const bool decoupled = config.r_a() == cplx{} && config.r_b() == cplx{};
    Eigen::Vector4d x;
    if (cond < kSingularCondition) {
        x = A.fullPivLu().solve(b);
    } else if (decoupled) {
        svd.setThreshold(1e-12);
        x = svd.solve(b);
        out.least_norm = true;
    } else {
        std::ostringstream os;
        os << "commutator system is singular (condition number " << cond << ")";
        throw NumericalError(os.str());
    }

    out.values.c_aa = x(0);
    out.values.c_bb = x(1);
    out.values.d_ab = {x(2), x(3)};
    // [a_out, b_out^dag] = 0 gives det(H) C_ab = 0.
    out.values.c_ab = cplx{};
    out.residual = sys.residual(out.values);
    return out;
}

CommutatorSet commutators_closed_form(const SystemConfig& config) {
    const cplx ra = config.r_a();
    const cplx rb = config.r_b();
    CommutatorSet c;
    c.c_aa = config.signal.one_minus_alpha_sq() - std::norm(ra);
    c.c_bb = config.idler.one_minus_alpha_sq() - std::norm(rb);
    c.d_ab = kI * (std::conj(rb) - ra);
    c.c_ab = cplx{};
    return c;
}

DiagonalCommutators highq_commutator_limit(const SystemConfig& config) {
    const cplx k = config.pump.coupling();
    const double ta = config.signal.round_trip();
    const double tb = config.idler.round_trip();
    return {config.signal.gamma_int() * ta - std::norm(k * ta),
            config.idler.gamma_int() * tb - std::norm(k * tb)};
}

}  // namespace ringpair
