#pragma once

#include "ringpair/mat2.hpp"
#include "ringpair/resonator.hpp"

namespace ringpair {

enum class Location { output_bus, intracavity };

// The coupled-mode response at one detuning:
//
//   output_bus:  a_out  = G a_in + H f
//   intracavity: a(L-)  = G a_in + H f      (G^(L), H^(L))
//
// with vectors ordered (a, b^dagger). D is the shared denominator
// (1 - rho_a xi_a)(1 - rho_b xi_b) - r_a r_b.
struct TransferPair {
    Mat2 G;
    Mat2 H;
    cplx D;
    Location location = Location::output_bus;
};

// The matrices of the coupled equations of motion
//   M a(L-) = P_xi a(0+) + f,  a(0+) = T_rho a(L-) + X_tau a_in,
//   a_out = X_tau a(L-) - T_rho a_in.
struct BuildingBlocks {
    Mat2 M;      // [[1, i r_a], [-i r_b, 1]]
    Mat2 P_xi;   // diag(xi_a, xi_b)
    Mat2 T_rho;  // diag(rho_a, rho_b)
    Mat2 X_tau;  // diag(tau_a, tau_b)
    cplx xi_a;
    cplx xi_b;
};

// S = 1 / (1 - rho alpha e^{i theta}); throws PoleError when rho*alpha >= 1.
cplx circulation_factor(double rho, double alpha, double theta);

// Lossless bus transfer e^{i theta} (1 - rho e^{-i theta}) / (1 - rho e^{i theta}).
cplx lossless_transfer(double rho, double theta);

// Classical lossy transfer (alpha e^{i theta} - rho) / (1 - rho alpha e^{i theta}).
// This is also the decoupled limit of G_kk, so the sign convention matches
// output_transfer; observables only use |G|.
cplx classical_lossy_transfer(double rho, double alpha, double theta);

// |H| = sqrt(1 - |G|^2). Throws UnitarityError for |G| > 1 + 1e-12.
double single_mode_noise_magnitude(cplx G);

enum class PumpPoint { entry_0plus, exit_Lminus };

// Classical pump field inside the ring, just after the coupler (0+) or just
// before it (L-), for a lossless pump mode.
cplx pump_in_ring(const ModeParams& pump_mode, double theta_c, cplx c_in, PumpPoint point);

// Pump field on the output bus; unimodular.
cplx pump_out(const ModeParams& pump_mode, double theta_c, cplx c_in);

BuildingBlocks building_blocks(const SystemConfig& config, double omega);

// Closed-form G and H entries on the output bus. Throws PoleError if D = 0.
TransferPair output_transfer(const SystemConfig& config, double omega);

// Same matrices from the composition
//   H = X_tau (M - P_xi T_rho)^{-1},  G = H P_xi X_tau - T_rho.
// Independent of the closed-form entries; used to cross-check them.
TransferPair output_transfer_composed(const SystemConfig& config, double omega);

// Closed-form G^(L), H^(L) at z = L-. Throws ValidationError if tau_a or
// tau_b is zero and PoleError if D = 0.
TransferPair intracavity_transfer(const SystemConfig& config, double omega);

// G^(L) = X_tau^{-1} H P_xi X_tau, H^(L) = X_tau^{-1} H from the composed H.
TransferPair intracavity_transfer_composed(const SystemConfig& config, double omega);

TransferPair transfer(const SystemConfig& config, double omega, Location location);

// diag(sqrt(1 - alpha_a^2), sqrt(1 - alpha_b^2))
Mat2 loss_rescaling(const SystemConfig& config);

// H~ = H Lambda_alpha: noise matrix for operators with unit-normalised
// commutators.
Mat2 rescaled_noise_matrix(const TransferPair& pair, const SystemConfig& config);

}  // namespace ringpair
