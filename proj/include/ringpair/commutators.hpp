#pragma once

#include <array>

#include "ringpair/resonator.hpp"
#include "ringpair/transfer.hpp"

namespace ringpair {

// Constants of the noise-operator commutators
//   [f_a, f_a^dag] = C_aa,  [f_b, f_b^dag] = C_bb,
//   [f_a, f_b^dag] = C_ab,  [f_a, f_b]     = D_ab   (times delta(w - w')).
struct CommutatorSet {
    double c_aa = 0.0;
    double c_bb = 0.0;
    cplx c_ab{};
    cplx d_ab{};
};

// Linear system imposed by canonical output commutators. Unknowns are ordered
// (C_aa, C_bb, Re D_ab, Im D_ab). Rows:
//   0: [a_out, a_out^dag] = 1
//   1: [b_out, b_out^dag] = 1
//   2, 3: real and imaginary part of [a_out, b_out] = 0
struct CommutatorSystem {
    std::array<std::array<double, 4>, 4> A{};
    std::array<double, 4> rhs{};

    // max_i |(A x - rhs)_i| for x = (C_aa, C_bb, Re D_ab, Im D_ab)
    double residual(const CommutatorSet& c) const;
};

CommutatorSystem assemble_commutator_system(const TransferPair& pair);

struct CommutatorSolve {
    CommutatorSet values;
    double condition_number = 0.0;
    double residual = 0.0;
    bool least_norm = false;  // true when the decoupled, rank-deficient path was taken
};

// Condition number above which the system is treated as singular.
inline constexpr double kSingularCondition = 1e12;

// Solves the 4x4 system. Rank-deficient decoupled systems (r = 0 with a
// vanishing H row) get the least-norm solution; any other singular system
// throws NumericalError with the condition number in the message.
CommutatorSolve solve_commutators_numeric(const TransferPair& pair, const SystemConfig& config);

// C_kk = 1 - alpha_k^2 - |r_k|^2,  D_ab = i (r_b^* - r_a),  C_ab = 0.
// None of these depend on omega.
CommutatorSet commutators_closed_form(const SystemConfig& config);

struct DiagonalCommutators {
    double c_aa;
    double c_bb;
};

// High-Q limit gamma'_k T_k - |g alpha_p T_k|^2.
DiagonalCommutators highq_commutator_limit(const SystemConfig& config);

}  // namespace ringpair
